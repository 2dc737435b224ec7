import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbint.errors import BadCharacteristic, UnsupportedOrder
from orbint.rootdata import (
    CoinvariantClasses,
    KappaChar,
    build_root_datum,
    coinvariants,
    endoscopic_datum,
    nonstandard_pair_check,
    resultant_degree_global,
)


def test_build_examples():
    rd = build_root_datum("SL", 2, 3)
    assert (rd.rank, rd.num_roots, rd.exponents, rd.weyl_order) == (1, 2, (2,), 2)
    rd3 = build_root_datum("GL", 3, 5)
    assert (rd3.rank, rd3.num_roots, rd3.exponents) == (3, 6, (1, 2, 3))
    with pytest.raises(BadCharacteristic):
        build_root_datum("SL", 2, 2)


@pytest.mark.parametrize("kind", ["GL", "SL", "PGL"])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_exponent_sum_invariant(kind, n):
    if kind != "GL" and n == 1:
        n = 2
    p = 7 if n <= 6 else 11
    if math.factorial(n) % p == 0:
        p = 11
    rd = build_root_datum(kind, n, p)
    assert sum(rd.exponents) == rd.rank + rd.num_roots // 2


def test_endoscopic_examples():
    sl2 = build_root_datum("SL", 2, 3)
    ed = endoscopic_datum(sl2, [Fr(1, 2)])
    assert ed.H_kind == "torus" and ed.num_sub_roots == 0
    ed1 = endoscopic_datum(sl2, [Fr(0)])
    assert ed1.H_kind == "G" and ed1.num_sub_roots == 2
    sl3 = build_root_datum("SL", 3, 5)
    ed3 = endoscopic_datum(sl3, [Fr(1, 3), Fr(2, 3)])
    assert ed3.H_kind == "torus" and ed3.num_sub_roots == 0
    with pytest.raises(UnsupportedOrder):
        endoscopic_datum(sl3, [Fr(1, 5), Fr(0)])


def test_kappa_inverse_same_subsystem():
    sl3 = build_root_datum("SL", 3, 5)
    for vec in ([Fr(1, 3), Fr(2, 3)], [Fr(1, 3), Fr(0)], [Fr(1, 2), Fr(1, 2)]):
        k = KappaChar(tuple(vec))
        kinv = KappaChar(tuple(-c for c in vec))
        e1 = endoscopic_datum(sl3, k)
        e2 = endoscopic_datum(sl3, kinv)
        assert e1.sub_roots == e2.sub_roots


def test_resultant_degree_examples():
    sl2 = build_root_datum("SL", 2, 3)
    ed = endoscopic_datum(sl2, [Fr(1, 2)])
    assert resultant_degree_global(ed, 4) == 4
    ed1 = endoscopic_datum(sl2, [Fr(0)])
    assert resultant_degree_global(ed1, 7) == 0
    sl3 = build_root_datum("SL", 3, 5)
    ed3 = endoscopic_datum(sl3, [Fr(1, 3), Fr(2, 3)])
    assert resultant_degree_global(ed3, 2) == 6


def test_coinvariants_examples():
    assert str(coinvariants(1, [[[1]]])) == "Z"
    assert str(coinvariants(1, [[[-1]]])) == "Z/2"
    assert str(coinvariants(2, [[[0, 1], [1, 0]]])) == "Z"


def _rand_glz(rng_elems):
    """Build a small unimodular matrix from shear generators."""
    import random

    rng = random.Random(rng_elems)
    mats = [[[1, 0], [0, 1]]]
    M = [[1, 0], [0, 1]]
    for _ in range(4):
        c = rng.choice([-1, 1, 2])
        if rng.random() < 0.5:
            S = [[1, c], [0, 1]]
        else:
            S = [[1, 0], [c, 1]]
        M = [[sum(M[i][k] * S[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return M


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_coinvariants_conjugation_invariant(seed):
    U = _rand_glz(seed)
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    assert abs(det) == 1
    Uinv = [[U[1][1] * det, -U[0][1] * det], [-U[1][0] * det, U[0][0] * det]]
    gens = [[[0, 1], [1, 0]], [[-1, 0], [0, -1]]]

    def conj(w):
        T = [[sum(U[i][k] * w[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        return [[sum(T[i][k] * Uinv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    g1 = coinvariants(2, gens)
    g2 = coinvariants(2, [conj(w) for w in gens])
    assert (g1.free_rank, g1.torsion) == (g2.free_rank, g2.torsion)


def test_nonstandard_pair_examples():
    sl2 = build_root_datum("SL", 2, 3)
    pgl2 = build_root_datum("PGL", 2, 3)
    gl2 = build_root_datum("GL", 2, 3)
    assert nonstandard_pair_check(sl2, pgl2, 3)
    assert not nonstandard_pair_check(sl2, pgl2, 2)
    assert nonstandard_pair_check(gl2, gl2, 3)


def test_torsion_class_labels():
    cc = CoinvariantClasses(1, [[[-1]]])
    assert cc.torsion_class_of([3]) == (1,)
    assert cc.torsion_class_of([2]) == (0,)
    assert cc.group.torsion == (2,)
