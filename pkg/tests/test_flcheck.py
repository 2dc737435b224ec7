import json
import os

import pytest

from orbint.errors import HypothesisViolated, ParseError
from orbint.flcheck import (
    canonical_report_hash,
    emit_case,
    generate_corpus,
    global_formulas,
    parse_case,
    reports_to_csv,
    reports_to_jsonl,
    run_case,
    run_corpus,
)
from orbint.rootdata import build_root_datum


def _case(**kw):
    base = dict(case_id="t", q=3, p=3, m=1, kind="SL", n=2, coeffs=["0", "1*e^2"])
    base.update(kw)
    return base


def test_parse_emit_roundtrip():
    case = parse_case(_case(kappa={"vector": ["1/2"]}))
    text = emit_case(case)
    again = parse_case(text)
    assert emit_case(again) == text


def test_parse_validation():
    with pytest.raises(ParseError):
        parse_case(_case(q=9))  # q != p^m
    with pytest.raises(ParseError):
        parse_case(_case(kind="SO"))
    with pytest.raises(ParseError):
        parse_case({k: v for k, v in _case().items() if k != "coeffs"})
    with pytest.raises(ParseError):
        parse_case(_case(coeffs=["0"]))


def test_malformed_series_position():
    case = parse_case(_case(coeffs=["0", "2**e"]))
    with pytest.raises(ParseError) as ex:
        run_case(case, mode="invariants")
    assert ex.value.column == 2


def test_run_case_modes():
    rep = run_case(parse_case(_case()), mode="invariants")
    assert rep.passed and rep.identity == "invariants"
    rep2 = run_case(parse_case(_case()), mode="nonstandard")
    assert rep2.passed
    ls = parse_case(_case(coeffs=None, h_coord="e", kappa={"vector": ["1/2"]}))
    rep3 = run_case(ls, mode="ls")
    assert rep3.passed and rep3.r_v == 1


def test_not_regular_case_rejected():
    # disc == 0 at every precision: a = (0, 0) is outside c-heart
    case = parse_case(_case(coeffs=["0", "0"]))
    from orbint.errors import NotRegular

    with pytest.raises(NotRegular):
        run_case(case, mode="invariants")


def test_corpus_deterministic_and_passing():
    reports, errors = run_corpus(seed=1, count=20, q=3, kind="SL", n=2, depth=3)
    assert len(reports) == 20 and not errors
    assert all(r.passed for r in reports)
    reports2, _ = run_corpus(seed=1, count=20, q=3, kind="SL", n=2, depth=3)
    assert canonical_report_hash(reports) == canonical_report_hash(reports2)
    # different seed, different corpus
    reports3, _ = run_corpus(seed=2, count=20, q=3, kind="SL", n=2, depth=3)
    assert canonical_report_hash(reports) != canonical_report_hash(reports3)


def test_corpus_errors_recorded_run_continues():
    cases = generate_corpus(seed=5, count=5, q=3, kind="SL", n=2, depth=2)
    cases[2].coeffs = ("0", "2**e")  # malformed in the middle
    reports = []
    errors = []
    for c in cases:
        try:
            reports.append(run_case(c, mode="invariants"))
        except Exception as ex:
            errors.append((c.case_id, type(ex).__name__))
    assert len(reports) == 4 and len(errors) == 1


def test_csv_and_jsonl_shape():
    reports, _ = run_corpus(seed=3, count=4, q=3, kind="SL", n=2, depth=2)
    csv_text = reports_to_csv(reports)
    header = csv_text.splitlines()[0]
    assert header == "case_id,q,kind,n,d,c,delta,r_v,kappa_order,lhs,rhs,pass"
    assert len(csv_text.splitlines()) == 5
    jl = reports_to_jsonl(reports)
    rows = [json.loads(line) for line in jl.splitlines()]
    assert all(row["pass"] for row in rows)
    assert all("timing" in row for row in rows)


def test_global_formulas_examples():
    sl2 = build_root_datum("SL", 2, 3)
    out = global_formulas(sl2, g=0, degD=2)
    assert out == {"dimA": 5, "dimPa": 1, "delta_sum_bound": 2}
    gl1 = build_root_datum("GL", 1, 3)
    out1 = global_formulas(gl1, g=1, degD=1)
    assert out1["dimA"] == 1 and out1["dimPa"] == 0
    with pytest.raises(HypothesisViolated):
        global_formulas(sl2, g=2, degD=2)


def test_global_formulas_identity_random():
    import random

    rng = random.Random(9)
    for _ in range(20):
        kind = rng.choice(["GL", "SL", "PGL"])
        n = rng.choice([1, 2, 3, 4])
        if kind != "GL" and n == 1:
            n = 2
        p = 5 if n <= 4 else 7
        rd = build_root_datum(kind, n, p)
        g = rng.choice([0, 1, 2])
        degD = rng.randrange(2 * g - 1, 2 * g + 5)
        if degD <= 2 * g - 2:
            continue
        if (rd.num_roots * degD) % 2:
            continue
        out = global_formulas(rd, g, degD)
        assert out["dimA"] + out["dimPa"] == (rd.rank + rd.num_roots) * degD


def test_precision_cap_env(monkeypatch):
    monkeypatch.setenv("FLCHECK_PRECISION_CAP", "24")
    from orbint import flcheck

    case = parse_case(_case())
    rep = run_case(case, mode="invariants")
    assert rep.precision <= 24


def test_cli_exit_codes(tmp_path):
    from orbint.cli import main

    good = tmp_path / "good.json"
    good.write_text(json.dumps(_case()))
    assert main(["invariants", str(good), "--out", str(tmp_path / "o.jsonl")]) == 0

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(_case(coeffs=["0", "2**e"])))
    assert main(["invariants", str(bad), "--out", str(tmp_path / "o2.jsonl")]) == 1

    malformed = tmp_path / "malformed.json"
    malformed.write_text(json.dumps({"case_id": "x"}))
    assert main(["invariants", str(malformed)]) == 2

    csv_out = tmp_path / "r.csv"
    rc = main(["verify-nonstandard", str(good), "--format", "csv", "--out", str(csv_out)])
    assert rc == 0
    assert csv_out.read_text().splitlines()[0].startswith("case_id,q,kind")
