"""Counting lattices in affine Springer fibers.

The fiber of a characteristic a is modelled by B-stable lattices in the
total ring E = B (x) F; every lattice has a unique representative in the
conductor sandwich c * Bflat <= L <= Bflat up to the symmetry lattice
Lambda, so the Lambda-quotient is a finite, exactly enumerable object.

Two classical laws are reproduced here:

  * the tree-ball law: for GL_2 unramified elliptic with local invariant
    delta, the quotient has 1 + (q+1)(q^delta - 1)/(q - 1) rational
    points (a ball of radius delta in the Bruhat-Tits tree);

  * the chain counts: for d = 2, c = 0 the fiber is a chain of
    projective lines and the groupoid count is q/(q-1) in the split
    case and q/(q+1) nonsplit kappa-weighted.
"""

from fractions import Fraction

from orbint import FqField, LocalChar, build_root_datum, enumerate_fiber
from orbint.series import TruncSeries
from orbint.spectral import canonical_nonresidue
from orbint.springer import FiberAnalysis


def elliptic(kind, q, depth, prec=None):
    field = FqField(q)
    prec = prec or (4 * depth + 8)
    rd = build_root_datum(kind, 2, q)
    u = canonical_nonresidue(field)
    return LocalChar(
        rd, [TruncSeries.zero(field, prec), TruncSeries.monomial(field, -u, 2 * depth, prec)]
    )


def split(kind, q, depth=1, prec=16):
    field = FqField(q)
    rd = build_root_datum(kind, 2, q)
    return LocalChar(
        rd,
        [TruncSeries.zero(field, prec),
         TruncSeries.monomial(field, field.elt(-1), 2 * depth, prec)],
    )


if __name__ == "__main__":
    print("tree-ball law for GL_2:")
    for q in (3, 5):
        for delta in (1, 2, 3):
            a = elliptic("GL", q, delta)
            pts = enumerate_fiber(a)
            predicted = 1 + (q + 1) * (q ** delta - 1) // (q - 1)
            print(f"  q={q} delta={delta}: {len(pts):4d} points "
                  f"(closed form {predicted}) "
                  f"{'ok' if len(pts) == predicted else 'MISMATCH'}")

    print("\nchain counts at d = 2, c = 0:")
    for q in (3, 5, 7):
        fa = FiberAnalysis(split("SL", q))
        print(f"  split   q={q}: #X(k)        = {fa.groupoid_count('SL').value}"
              f"  (= q/(q-1) = {Fraction(q, q-1)})")
        fb = FiberAnalysis(elliptic("SL", q, 1))
        val = fb.groupoid_count("SL", [Fraction(1, 2)]).value
        print(f"  nonsplit q={q}: #X(k)_kappa = {val}"
              f"  (= q/(q+1) = {Fraction(q, q+1)})")

    print("\npoint census for GL_2, q=3, elliptic depth 1:")
    for p in enumerate_fiber(elliptic("GL", 3, 1)):
        print(f"  component {p.component}  index {p.index_dim}  "
              f"stabilizer order {p.stabilizer_order}")
