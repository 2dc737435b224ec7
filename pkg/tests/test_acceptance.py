"""Acceptance suite: one test per criterion, exact tolerances, one printed
pass/fail line each.  Run with `pytest tests/test_acceptance.py -v -s`.

Every comparison below is an exact equality of elements of Q(zeta_m); no
tolerance is deferred anywhere.
"""

import random
import time
from fractions import Fraction as Fr

import pytest

from orbint.finitefield import FqField
from orbint.flcheck import generate_corpus, global_formulas, run_case
from orbint.rootdata import build_root_datum, endoscopic_datum
from orbint.series import TruncSeries, parse_series
from orbint.spectral import (
    HPoint,
    LocalChar,
    canonical_nonresidue,
    compute_invariants,
    detect_simple_case,
)
from orbint.springer import FiberAnalysis, enumerate_fiber, truncation_level
from orbint.orbital import ls_check, nonstandard_check

from conftest import elliptic_sl2, make_char

KAPPA = [Fr(1, 2)]


def _report(name, passed, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} {detail}")
    assert passed, f"{name} failed: {detail}"


# -- criterion 1: the transfer identity suite --------------------------------


def test_criterion_1_ls_identity_suite():
    """q in {3,5,7}, SL2 kappa=-1, unramified elliptic a_H of depth 0,1,2:
    O^kappa = q^m SO exactly; >= 9 cases, each < 60 s at precision <= 16."""
    cases = 0
    worst = 0.0
    for q in (3, 5, 7):
        field = FqField(q)
        sl2 = build_root_datum("SL", 2, q)
        ed = endoscopic_datum(sl2, KAPPA)
        for depth in (0, 1, 2):
            lit = "1" if depth == 0 else (f"e^{depth}" if depth > 1 else "e")
            x = parse_series(lit, field, 16)
            t0 = time.time()
            rep = ls_check(ed, HPoint(ed, x), case_id=f"ls-q{q}-m{depth}")
            dt = time.time() - t0
            worst = max(worst, dt)
            assert rep.precision <= 16
            assert dt < 60.0, f"q={q} m={depth} took {dt:.1f}s"
            assert rep.passed and rep.r_v == depth
            assert rep.lhs == rep.rhs
            cases += 1
    _report("1 (LS identity suite)", cases >= 9, f"{cases} cases, worst {worst:.1f}s")


# -- criterion 2: simple-case closed form -------------------------------------


def test_criterion_2_simple_case_closed_form():
    """Every corpus case with detect_simple_case true satisfies
    #X(k)_kappa * #A(k) = q exactly; >= 20 cases."""
    checked = 0
    for q in (3, 5, 7):
        field = FqField(q)
        sl2 = build_root_datum("SL", 2, q)
        ed = endoscopic_datum(sl2, KAPPA)
        units = [field.from_int_index(k) for k in range(1, q)]
        for u in units:
            for tail in ({}, {3: 1}):
                spec = {2: 0}
                a2 = TruncSeries.monomial(field, -u, 2, 16)
                for k, c in tail.items():
                    a2 = a2 + TruncSeries.monomial(field, field.elt(c), k, 16)
                a = LocalChar(sl2, [TruncSeries.zero(field, 16), a2])
                if not detect_simple_case(a, ed):
                    continue
                inv = compute_invariants(a)
                assert (inv.d, inv.c) == (2, 0)
                elliptic = inv.branch_data.frobenius == (1, 0)
                torus = q + 1 if elliptic else q - 1
                fa = FiberAnalysis(a, invariants=inv)
                gc = fa.groupoid_count("SL", KAPPA)
                assert gc.value * torus == q, (q, u.c, tail)
                checked += 1
    _report("2 (simple-case law)", checked >= 20, f"{checked} cases")


# -- criterion 3: delta consistency over a 200-case corpus --------------------


def test_criterion_3_delta_consistency_corpus():
    """200 random tame cases, n <= 3, q in {3,5,7}, d <= 6: the two delta
    computations agree with zero failures (enforced inside
    compute_invariants; any disagreement raises Inconsistent)."""
    plan = [
        (1, 60, dict(q=3, kind="SL", n=2, depth=3)),
        (2, 40, dict(q=3, kind="GL", n=2, depth=3)),
        (3, 30, dict(q=5, kind="GL", n=2, depth=3)),
        (4, 20, dict(q=7, kind="SL", n=2, depth=2)),
        (5, 20, dict(q=5, kind="GL", n=3, depth=2)),
        (6, 15, dict(q=7, kind="GL", n=3, depth=1)),
        (7, 15, dict(q=3, kind="PGL", n=2, depth=3)),
        (8, 10, dict(q=5, kind="SL", n=3, depth=2)),
    ]
    total = 0
    for seed, count, kw in plan:
        for case in generate_corpus(seed, count, **kw):
            rep = run_case(case, mode="invariants")
            if rep.d > 6:
                continue
            assert rep.passed
            assert Fr(rep.d - rep.c, 2) == rep.delta
            total += 1
    _report("3 (delta consistency)", total >= 200, f"{total} cases, 0 failures")


# -- criterion 4: tree-ball law ------------------------------------------------


def test_criterion_4_tree_ball():
    """GL2 unramified elliptic, delta in {1,2,3}, q in {3,5}: Lambda-quotient
    point totals equal 1 + (q+1)(q^delta - 1)/(q - 1); 6 cases < 120 s."""
    cases = []
    for q in (3, 5):
        for delta in (1, 2, 3):
            t0 = time.time()
            a = elliptic_sl2(q, delta)
            agl = LocalChar(build_root_datum("GL", 2, q), list(a.coeffs))
            pts = enumerate_fiber(agl)
            dt = time.time() - t0
            expected = 1 + (q + 1) * (q ** delta - 1) // (q - 1)
            assert dt < 120.0, f"q={q} delta={delta} took {dt:.1f}s"
            assert len(pts) == expected, (q, delta, len(pts), expected)
            cases.append((q, delta, dt))
    worst = max(dt for _, _, dt in cases)
    _report("4 (tree-ball law)", len(cases) == 6, f"worst {worst:.1f}s")


# -- criterion 5: chain-example values ------------------------------------------


def test_criterion_5_chain_values():
    """Split depth-1: #X(k) = q/(q-1); nonsplit kappa-weighted: q/(q+1)."""
    ok = True
    for q in (3, 5, 7):
        for kind in ("SL", "GL"):
            asp = make_char(kind, 2, q, [{}, {2: -1}])
            val = FiberAnalysis(asp).groupoid_count(kind).value
            ok = ok and val == Fr(q, q - 1)
        a = elliptic_sl2(q, 1)
        valk = FiberAnalysis(a).groupoid_count("SL", KAPPA).value
        ok = ok and valk == Fr(q, q + 1)
    _report("5 (chain values)", ok)


# -- criterion 6: the non-standard identity --------------------------------------


def test_criterion_6_nonstandard():
    """SL2 vs PGL2 matched stable orbitals agree exactly, q in {3,5},
    d <= 4; >= 6 cases."""
    cases = 0
    for q in (3, 5):
        field = FqField(q)
        u = canonical_nonresidue(field)
        specs = [
            (-u, 2),            # elliptic d=2
            (-u, 4),            # elliptic d=4
            (field.elt(-1), 1),  # ramified d=1
            (-u, 3),            # ramified d=3
            (field.elt(-1), 2),  # split d=2
            (field.elt(-1), 4),  # split d=4
        ]
        for c, k in specs:
            sl2 = build_root_datum("SL", 2, q)
            a = LocalChar(sl2, [TruncSeries.zero(field, 20),
                                TruncSeries.monomial(field, c, k, 20)])
            rep = nonstandard_check(a, case_id=f"nonstd-q{q}-k{k}")
            assert rep.passed, (q, k, rep.lhs, rep.rhs)
            assert rep.d <= 4
            cases += 1
    _report("6 (non-standard identity)", cases >= 6, f"{cases} cases")


# -- criterion 7: Lambda independence ----------------------------------------------


def test_criterion_7_lambda_independence():
    """Counts unchanged under index-2 and index-3 Lambda refinement on 20
    corpus cases (exact)."""
    rng = random.Random(77)
    checked = 0
    pool = []
    for q, kind in [(3, "SL"), (3, "GL"), (5, "SL"), (5, "GL"), (3, "PGL")]:
        pool.extend((q, kind, case) for case in
                    generate_corpus(q * 11, 6, q=q, kind=kind, n=2, depth=3))
    for q, kind, case in pool:
        if checked >= 20:
            break
        from orbint.flcheck import build_inputs

        rd, ed, a, N = build_inputs(case)
        fa = FiberAnalysis(a)
        s = fa.bd.num_geometric
        kappa = KAPPA if (kind == "SL" and not any(
            b.e > 1 for b in fa.bd.branches)) else None
        base = fa.groupoid_count(kind, kappa).value
        for k in (2, 3):
            if kind == "SL":
                if s < 2:
                    continue
                shift = [0] * s
                shift[0], shift[1] = k, -k
            else:
                shift = [k] + [0] * (s - 1)
            assert fa.groupoid_count(kind, kappa, lam_shift=tuple(shift)).value == base
        checked += 1
    _report("7 (Lambda independence)", checked >= 20, f"{checked} cases")


# -- criterion 8: precision stability -------------------------------------------------


def test_criterion_8_precision_stability():
    """Enumeration output identical at N = truncation_level(a) and N + 2."""
    specs = [
        ("SL", 3, [{}, {2: -2}]),
        ("SL", 3, [{}, {4: -2}]),
        ("SL", 3, [{}, {3: -2}]),
        ("GL", 3, [{}, {2: -1}]),
        ("GL", 5, [{}, {2: -2}]),
        ("GL", 5, [{}, {3: -1}]),
        ("PGL", 3, [{}, {2: -2}]),
        ("SL", 5, [{}, {1: -1}]),
        ("GL", 3, [{}, {4: -1, 5: 1}]),
        ("SL", 7, [{}, {2: -1}]),
    ]
    for kind, q, spec in specs:
        a_probe = make_char(kind, 2, q, spec, prec=40)
        N = truncation_level(compute_invariants(a_probe))

        def census(prec):
            a = make_char(kind, 2, q, spec, prec=prec)
            fa = FiberAnalysis(a)
            pts = fa.rational_points(kind)
            data = sorted((p.component, p.stabilizer_order, p.index_dim) for p in pts)
            kappa = KAPPA if kind == "SL" else None
            try:
                val = fa.groupoid_count(kind, kappa).value
            except Exception:
                val = fa.groupoid_count(kind, None).value
            return data, val

        assert census(N) == census(N + 2), (kind, q, spec)
    _report("8 (precision stability)", True, f"{len(specs)} cases")


# -- criterion 9: formula evaluators ------------------------------------------------------


def test_criterion_9_global_formulas():
    """Hand-computed tuples plus dimA + dimPa = (r + #Phi) degD on random
    inputs."""
    hand = [
        ("SL", 2, 3, 0, 2, {"dimA": 5, "dimPa": 1, "delta_sum_bound": 2}),
        ("GL", 1, 3, 1, 1, {"dimA": 1, "dimPa": 0, "delta_sum_bound": 0}),
        ("GL", 2, 3, 0, 3, {"dimA": 3 + 2 * 4, "dimPa": 3 - 2, "delta_sum_bound": 3}),
        ("SL", 3, 5, 1, 2, {"dimA": 6 + 2 * 2, "dimPa": 6, "delta_sum_bound": 6}),
        ("PGL", 2, 3, 2, 4, {"dimA": 4 + 1 * 3, "dimPa": 4 + 1, "delta_sum_bound": 4}),
    ]
    for kind, n, p, g, degD, want in hand:
        rd = build_root_datum(kind, n, p)
        assert global_formulas(rd, g, degD) == want, (kind, n, g, degD)
    rng = random.Random(99)
    done = 0
    while done < 20:
        kind = rng.choice(["GL", "SL", "PGL"])
        n = rng.choice([1, 2, 3, 4])
        if kind != "GL" and n == 1:
            n = 2
        rd = build_root_datum(kind, n, 5 if n <= 4 else 7)
        g = rng.choice([0, 1, 2])
        degD = rng.randrange(max(0, 2 * g - 1), 2 * g + 5)
        if degD <= 2 * g - 2 or (rd.num_roots * degD) % 2:
            continue
        out = global_formulas(rd, g, degD)
        assert out["dimA"] + out["dimPa"] == (rd.rank + rd.num_roots) * degD
        done += 1
    _report("9 (formula evaluators)", True, "5 hand tuples + 20 random")
