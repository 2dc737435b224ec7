"""Counting with several clusters and the scoped-out error contracts."""

from fractions import Fraction as Fr

import pytest

from orbint.errors import Unsupported, UnsupportedKappa
from orbint.finitefield import FqField
from orbint.localfield import poly_mul
from orbint.rootdata import build_root_datum
from orbint.series import TruncSeries, parse_series
from orbint.spectral import LocalChar, compute_invariants, unit_index
from orbint.springer import FiberAnalysis
from orbint.orbital import kappa_orbital


def _from_poly(kind, q, P):
    n = len(P) - 1
    coeffs = []
    for k in range(1, n + 1):
        c = P[n - k]
        coeffs.append(-c if k % 2 == 1 else c)
    return LocalChar(build_root_datum(kind, n, q), coeffs)


def test_multicluster_product_structure():
    """(t - 1)(t^2 - 2 e^2) over F_5: the count and the rational point
    total factor over the clusters (trivial times elliptic depth 1)."""
    q = 5
    F = FqField(q)
    N = 16
    one = TruncSeries.one(F, N)
    lin = [parse_series("4", F, N), one]
    quad = [parse_series("3*e^2", F, N), TruncSeries.zero(F, N), one]
    a = _from_poly("GL", q, poly_mul(lin, quad))
    inv = compute_invariants(a)
    assert inv.s == 3 and inv.delta == 1 and len(inv.order_model.clusters) == 2
    fa = FiberAnalysis(a, invariants=inv)
    assert fa.groupoid_count("GL").value == Fr(q + 2, q + 1)
    assert unit_index(inv, q) == q + 1
    assert len(fa.rational_points("GL")) == q + 2


def test_sigma_swapped_clusters():
    """(t^2 - 2)(t - 1) over F_5: Frobenius transposes two residue
    clusters; the d = 0 fiber still counts to one."""
    q = 5
    F = FqField(q)
    N = 12
    one = TruncSeries.one(F, N)
    P = poly_mul([parse_series("3", F, N), TruncSeries.zero(F, N), one],
                 [parse_series("4", F, N), one])
    a = _from_poly("GL", q, P)
    inv = compute_invariants(a)
    assert inv.d == 0 and inv.s == 3
    fa = FiberAnalysis(a, invariants=inv)
    assert sorted(fa.cluster_image) == [0, 1, 2] and fa.cluster_image != [0, 1, 2]
    assert fa.groupoid_count("GL").value == 1
    assert len(fa.rational_points("GL")) == 1


def test_split_cluster_pair_with_depth():
    """(t-1)(t-1-e)(t-2) over F_5 as a GL_3 point: a split quadratic
    cluster of depth one next to a regular point."""
    q = 5
    F = FqField(q)
    N = 16
    one = TruncSeries.one(F, N)
    P = poly_mul(
        poly_mul([parse_series("4", F, N), one], [parse_series("4 + 4*e", F, N), one]),
        [parse_series("3", F, N), one],
    )
    a = _from_poly("GL", q, P)
    inv = compute_invariants(a)
    assert (inv.d, inv.c, inv.delta) == (2, 0, 1)
    fa = FiberAnalysis(a, invariants=inv)
    assert fa.groupoid_count("GL").value == Fr(q, q - 1)


@pytest.mark.parametrize("q", [3, 5])
def test_translation_invariance(q):
    """Counts only depend on the singularity germ: an elliptic pair
    centered at t = 1 matches the tree-ball law exactly as at t = 0."""
    from orbint.spectral import canonical_nonresidue

    F = FqField(q)
    N = 20
    u = canonical_nonresidue(F)
    one = TruncSeries.one(F, N)
    # P = (t - 1)^2 - u e^2
    P = [one - TruncSeries.monomial(F, u, 2, N), TruncSeries(F, [F.elt(-2)], N), one]
    a = _from_poly("GL", q, P)
    inv = compute_invariants(a)
    assert (inv.d, inv.delta) == (2, 1)
    fa = FiberAnalysis(a, invariants=inv)
    assert len(fa.rational_points("GL")) == q + 2
    assert fa.groupoid_count("GL").value == Fr(q + 2, q + 1)


def test_sl3_counting_unsupported():
    a = _from_poly("SL", 5, [parse_series("4*e^2", FqField(5), 16),
                             TruncSeries.zero(FqField(5), 16),
                             TruncSeries.zero(FqField(5), 16),
                             TruncSeries.one(FqField(5), 16)])
    inv = compute_invariants(a)
    assert inv.d > 0
    fa = FiberAnalysis(a, invariants=inv)
    with pytest.raises(Unsupported):
        fa.groupoid_count("SL")


def test_kappa_invariance_rejection():
    """An order-4 kappa on an elliptic SL_2 class is not Galois-invariant
    and must be rejected rather than silently paired."""
    from conftest import elliptic_sl2

    a = elliptic_sl2(5, 1)
    with pytest.raises(UnsupportedKappa):
        kappa_orbital(a, [Fr(1, 4)])


def test_order_data_view():
    from orbint.spectral import order_data
    from conftest import elliptic_sl2

    inv = compute_invariants(elliptic_sl2(3, 2))
    od = order_data(inv)
    assert od.delta == 2
    assert od.flat_dim - sum(len(b) for b in od.embed) == 2
    assert od.conductor_exponent == [(2, 2)]
