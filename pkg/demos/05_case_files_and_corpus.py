"""Case files, corpora and reports.

Cases are small JSON documents carrying the field, the group, coefficient
strings in the series-literal grammar (`c*e^k` terms joined by `+`), an
optional kappa vector and an optional precision override.  The same
machinery backs the flcheck CLI:

    flcheck verify-ls case.json --format csv
    flcheck corpus --seed 1 --count 50 --q 3 --kind SL --n 2
    flcheck formulas --kind SL --n 2 --genus 0 --degD 2
"""

import json

from orbint.flcheck import (
    canonical_report_hash,
    emit_case,
    global_formulas,
    parse_case,
    reports_to_csv,
    run_case,
    run_corpus,
)
from orbint.rootdata import build_root_datum

if __name__ == "__main__":
    case = parse_case(
        {
            "case_id": "demo-ls",
            "q": 3,
            "p": 3,
            "m": 1,
            "kind": "SL",
            "n": 2,
            "h_coord": "e",
            "kappa": {"vector": ["1/2"]},
        }
    )
    print("canonical case text:", emit_case(case))
    rep = run_case(case, mode="ls")
    print("report:", json.dumps(rep.to_json_dict(), sort_keys=True, default=str))

    reports, errors = run_corpus(seed=1, count=10, q=3, kind="SL", n=2, depth=3,
                                 mode="invariants")
    print(f"\ncorpus: {len(reports)} reports, {len(errors)} errors, "
          f"hash {canonical_report_hash(reports)[:16]}")
    print(reports_to_csv(reports))

    rd = build_root_datum("SL", 2, 3)
    print("global formulas, SL_2, g=0, degD=2:", global_formulas(rd, 0, 2))
