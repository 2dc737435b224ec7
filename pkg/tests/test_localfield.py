import random
from fractions import Fraction as Fr

import pytest

from orbint.errors import NotCoprime, PrecisionExhausted, WildRamification
from orbint.finitefield import FqField
from orbint.localfield import (
    branch_disc_valuation,
    disc_valuation,
    embed_series,
    factor_tame,
    hensel_lift,
    newton_polygon,
    poly_eval,
    poly_mul,
)
from orbint.series import TruncSeries, parse_series


def poly(field, prec, *lits):
    return [parse_series(t, field, prec) for t in lits]


def test_disc_valuation_examples(f3):
    P = poly(f3, 10, "2*e", "0", "1")        # t^2 - e
    assert disc_valuation(P) == 1
    P2 = poly(f3, 10, "1*e^2", "0", "1")     # t^2 - 2e^2
    assert disc_valuation(P2) == 2
    P3 = poly(f3, 10, "2", "0", "1")         # t^2 - 1
    assert disc_valuation(P3) == 0


def test_newton_polygon_examples(f3):
    assert newton_polygon(poly(f3, 10, "2*e", "0", "1")) == [(Fr(1, 2), 2)]
    assert newton_polygon(poly(f3, 10, "1*e^2", "0", "1")) == [(Fr(1), 2)]
    assert newton_polygon(poly(f3, 10, "2", "0", "1")) == [(Fr(0), 2)]


def test_polygon_precision_guard(f3):
    # constant coefficient unresolved at the hull: cannot certify
    zero_like = TruncSeries.zero(f3, 1)
    one = TruncSeries.one(f3, 10)
    with pytest.raises(PrecisionExhausted):
        newton_polygon([zero_like, zero_like, one])


def test_factor_tame_examples(f3):
    # t^2 - 2e^2: one arithmetic factor, e=1, f=2; two branches swapped
    bd = factor_tame(poly(f3, 12, "1*e^2", "0", "1"))
    assert bd.num_geometric == 2
    assert bd.arithmetic == [(1, 2, (0, 1))]
    assert bd.frobenius == (1, 0)
    # t^2 - e: e=2, f=1, s=1
    bd2 = factor_tame(poly(f3, 12, "2*e", "0", "1"))
    assert bd2.num_geometric == 1
    assert bd2.arithmetic == [(2, 1, (0,))]
    # (t-1)(t-1-e): split, trivial Frobenius
    P = poly_mul(poly(f3, 12, "2", "1"), poly(f3, 12, "2 + 2*e", "1"))
    bd3 = factor_tame(P)
    assert bd3.num_geometric == 2
    assert bd3.frobenius == (0, 1)
    assert sorted((e, f) for e, f, _ in bd3.arithmetic) == [(1, 1), (1, 1)]


def test_factor_wild(f3):
    # t^3 - e over F_3 ramifies with e = 3 = p
    with pytest.raises(WildRamification):
        factor_tame(poly(f3, 12, "2*e", "0", "0", "1"))


def test_arithmetic_degrees_sum():
    for q in (3, 5, 7):
        field = FqField(q)
        P = poly(field, 14, "1*e^2", "0", "1")
        bd = factor_tame(P)
        assert sum(e * f for e, f, _ in bd.arithmetic) == 2
        assert sum(f for _, f, _ in bd.arithmetic) == bd.num_geometric


def test_hensel_examples(f9):
    N = 8
    one = TruncSeries.one(f9, N)
    zero = TruncSeries.zero(f9, N)
    u0 = f9.gen  # sqrt(2)
    P = [TruncSeries.monomial(f9, f9.elt(-2), 2, N), zero, one]
    # seed known only mod e^2
    g = [TruncSeries(f9, TruncSeries.monomial(f9, -u0, 1, N).c[:2], N), one]
    h = [TruncSeries(f9, TruncSeries.monomial(f9, u0, 1, N).c[:2], N), one]
    G, H = hensel_lift(P, (g, h), N)
    prod = poly_mul(G, H)
    assert all((a - b).valuation() is None for a, b in zip(prod, P))
    # already exact seed is a fixed point
    P2 = [-one, zero, one]
    G2, H2 = hensel_lift(P2, ([-one, one], [one, one]), N)
    assert G2[0] == -one and H2[0] == one
    with pytest.raises(NotCoprime):
        hensel_lift([zero, zero, one], ([zero, one], [zero, one]), N)


def _random_separable(rng, field, deg, prec):
    while True:
        coeffs = []
        for _ in range(deg):
            c = [rng.randrange(field.q) for _ in range(prec // 2)]
            coeffs.append(TruncSeries(field, [field.from_int_index(x) for x in c], prec))
        P = coeffs + [TruncSeries.one(field, prec)]
        try:
            disc_valuation(P)
            return P
        except PrecisionExhausted:
            continue


@pytest.mark.parametrize("q", [3, 5, 7])
def test_roots_reproduce_polynomial(q):
    """Every factored root is a root and the polygon slopes match the
    root valuation multiset (degree <= 4, random draws)."""
    rng = random.Random(q * 17)
    field = FqField(q)
    prec = 16
    for _ in range(6):
        deg = rng.choice([2, 3, 4])
        P = _random_separable(rng, field, deg, prec)
        try:
            bd = factor_tame(P)
        except WildRamification:
            continue
        assert bd.slot_count() == deg
        PK = [embed_series(c, bd.K) for c in P]
        from orbint.localfield import reindex_series

        slot_vals = []
        for (bi, j) in bd.slot_list():
            root = bd.slot_root(bi, j)
            e = bd.branches[bi].e
            Pe = [reindex_series(c, e) for c in PK]
            val = poly_eval(Pe, root)
            assert val.valuation() is None or val.valuation() >= root.prec - 2 * deg
            v = root.valuation()
            slot_vals.append(Fr(v, e) if v is not None else None)
        # polygon slopes = multiset of root valuations
        seg = newton_polygon(P)
        expanded = []
        for slope, length in seg:
            expanded.extend([slope] * length)
        finite = sorted(x for x in slot_vals if x is not None)
        poly_slopes = sorted(x for x in expanded if x is not None)
        assert finite == poly_slopes
        # disc valuation oracle: pairwise root differences
        assert disc_valuation(P) == branch_disc_valuation(bd)


def test_determinism(f3):
    P = poly(f3, 12, "1*e^2", "0", "1")
    b1 = factor_tame(P)
    b2 = factor_tame(P)
    assert [(b.e, b.root.c) for b in b1.branches] == [(b.e, b.root.c) for b in b2.branches]
    assert b1.frobenius == b2.frobenius and b1.frob_twists == b2.frob_twists
