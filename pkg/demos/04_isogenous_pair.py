"""Stable orbital integrals across the SL_2 / PGL_2 isogeny.

The two characteristic spaces are canonically identified at good p, so a
single coefficient vector drives both computations.  The SL_2 side
filters lattices by the index condition; the PGL_2 side quotients by
homotheties.  Their stable orbital integrals under the compatible Neron
normalizations agree exactly, branch type by branch type.
"""

from orbint import FqField, LocalChar, build_root_datum
from orbint.series import TruncSeries
from orbint.spectral import canonical_nonresidue
from orbint.orbital import nonstandard_check

if __name__ == "__main__":
    print(f"{'case':>12s} {'q':>3s} {'d':>3s} {'SO(sl2)':>10s} {'SO(pgl2)':>10s}")
    for q in (3, 5):
        field = FqField(q)
        u = canonical_nonresidue(field)
        shapes = [
            ("elliptic d2", -u, 2),
            ("elliptic d4", -u, 4),
            ("split d2", field.elt(-1), 2),
            ("split d4", field.elt(-1), 4),
            ("ramified d1", field.elt(-1), 1),
            ("ramified d3", -u, 3),
        ]
        sl2 = build_root_datum("SL", 2, q)
        for name, c, k in shapes:
            a = LocalChar(sl2, [TruncSeries.zero(field, 20),
                                TruncSeries.monomial(field, c, k, 20)])
            rep = nonstandard_check(a, case_id=f"demo-{name}")
            flag = "ok" if rep.passed else "MISMATCH"
            print(f"{name:>12s} {q:3d} {rep.d:3d} {str(rep.lhs):>10s} "
                  f"{str(rep.rhs):>10s}  {flag}")
