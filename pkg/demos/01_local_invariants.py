"""Local invariants of a characteristic over F_q[[e]].

A point a of the characteristic space is a coefficient vector
(a_1, ..., a_n) with P(a,t) = t^n - a_1 t^(n-1) + ... + (-1)^n a_n.
This walk-through computes, for a handful of quadratic and cubic
characteristics over F_3[[e]] and F_5[[e]]:

  d      discriminant valuation,
  s      number of geometric branches,
  c      monodromy defect (toric rank drop of the Neron model),
  delta  dim(Bflat/B), cross-checked against (d - c)/2,
  the conductor profile of the order B = O[t]/P, and the radicial
  valuations r(alpha) = val(root_i - root_j), which always sum to d.
"""

from orbint import FqField, LocalChar, build_root_datum, compute_invariants
from orbint.series import parse_series


def show(kind, n, q, coeff_literals, precision=16):
    field = FqField(q)
    rd = build_root_datum(kind, n, q)
    coeffs = [parse_series(text, field, precision) for text in coeff_literals]
    a = LocalChar(rd, coeffs)
    inv = compute_invariants(a)
    print(f"{kind}_{n} over F_{q}[[e]],  a = {coeff_literals}")
    print(f"  d = {inv.d}   s = {inv.s}   c = {inv.c}   delta = {inv.delta}")
    print(f"  pi_0 of the symmetry group (connected model): {inv.pi0}")
    print(f"  conductor eta-profile per cluster: {inv.conductor}")
    rad = sorted(inv.radicial.items())
    print(f"  radicial valuations: {[(pair, str(v)) for pair, v in rad]}")
    print(f"  sum = {sum(inv.radicial.values())} = d\n")
    return inv


if __name__ == "__main__":
    # unramified elliptic: two branches swapped by Frobenius, delta = 1
    show("GL", 2, 3, ["0", "1*e^2"])
    # ramified quadratic: one branch with e = 2, delta = 0
    show("GL", 2, 3, ["0", "2*e"])
    # split: two rational branches meeting to order one
    show("SL", 2, 3, ["0", "2*e^2"])
    # a unit discriminant: everything vanishes
    show("SL", 2, 5, ["0", "4"])
    # a cubic with a zero root and a ramified pair
    show("GL", 3, 5, ["0", "4*e", "0"])
