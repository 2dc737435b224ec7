"""The endoscopic transfer identity at desk scale.

For SL_2 with the order-two character kappa, the endoscopic group H is a
one-dimensional torus; a point of its characteristic space is a single
integral series x, transferred to a = (0, -u x^2) with u the canonical
non-residue.  The identity checked exactly here is

    O^kappa_a(1_g, dt)  =  q^{r_v} * SO_{a_H}(1_h, dt),

where r_v is the resultant valuation (half the discriminant-valuation
drop under transfer) and both sides carry the shared Neron-connected
measure normalization.  The left side is an exact kappa-weighted lattice
count times a unit-group index; the right side is q^{r_v} since the torus
fiber is a single point.
"""

from fractions import Fraction

from orbint import FqField, build_root_datum, endoscopic_datum
from orbint.series import parse_series
from orbint.spectral import HPoint
from orbint.orbital import ls_check

if __name__ == "__main__":
    print("depth m -> unramified elliptic a_H with r_v = m,  O^kappa = q^m:")
    for q in (3, 5, 7):
        sl2 = build_root_datum("SL", 2, q)
        ed = endoscopic_datum(sl2, [Fraction(1, 2)])
        field = FqField(q)
        for lit in ("1", "e", "e^2", "2 + e", "1 + e^2"):
            rep = ls_check(ed, HPoint(ed, parse_series(lit, field, 16)),
                           case_id=f"demo-q{q}-{lit}")
            print(f"  q={q:d}  a_H = {lit:8s}  d={rep.d}  r_v={rep.r_v}  "
                  f"O^kappa={rep.lhs}  q^rv*SO={rep.rhs}  "
                  f"{'ok' if rep.passed else 'MISMATCH'}  ({rep.seconds:.2f}s)")
