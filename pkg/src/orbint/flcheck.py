"""Case-file I/O, corpus generation, global formula evaluators and report
emission.  All file formats are JSON with sorted keys; the CSV summary has
the fixed column set used by the golden files.

A case file carries q, p, m, the group kind and size, coefficient strings
in the series-literal grammar (either the characteristic coefficients
a_1..a_n or the endoscopic-side torus coordinate), an optional kappa
specification and an optional precision override.  emit . parse is the
identity on canonical form.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic
from .errors import (
    HypothesisViolated,
    NotRegular,
    OrbintError,
    ParseError,
    PrecisionExhausted,
)
from .finitefield import FqField
from .orbital import CaseReport, kappa_orbital, ls_check, nonstandard_check
from .rootdata import GL, PGL, SL, build_root_datum, endoscopic_datum
from .series import parse_series
from .spectral import HPoint, LocalChar, compute_invariants

CSV_COLUMNS = [
    "case_id",
    "q",
    "kind",
    "n",
    "d",
    "c",
    "delta",
    "r_v",
    "kappa_order",
    "lhs",
    "rhs",
    "pass",
]

DEFAULT_PRECISION_CAP = 256


def precision_cap():
    return int(os.environ.get("FLCHECK_PRECISION_CAP", DEFAULT_PRECISION_CAP))


@dataclass
class CaseFile:
    case_id: str
    q: int
    p: int
    m: int
    kind: str
    n: int
    coeffs: tuple = None        # series literals for a_1..a_n
    h_coord: str = None         # torus coordinate literal (endoscopic side)
    kappa: tuple = None         # Fraction strings in X_* coordinates
    precision: int = None

    def to_dict(self):
        d = {
            "case_id": self.case_id,
            "q": self.q,
            "p": self.p,
            "m": self.m,
            "kind": self.kind,
            "n": self.n,
        }
        if self.coeffs is not None:
            d["coeffs"] = list(self.coeffs)
        if self.h_coord is not None:
            d["h_coord"] = self.h_coord
        if self.kappa is not None:
            d["kappa"] = {"vector": [str(x) for x in self.kappa]}
        if self.precision is not None:
            d["precision"] = self.precision
        return d


def parse_case(data):
    """Parse a case dict (or JSON text) into a validated CaseFile."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as ex:
            raise ParseError(f"invalid JSON: {ex.msg}", line=ex.lineno, column=ex.colno)
    required = ["case_id", "q", "p", "m", "kind", "n"]
    for k in required:
        if k not in data:
            raise ParseError(f"missing case field {k!r}")
    q, p, m, n = data["q"], data["p"], data["m"], data["n"]
    if p ** m != q:
        raise ParseError(f"q = {q} is not p^m = {p}^{m}")
    kind = data["kind"]
    if kind not in (GL, SL, PGL):
        raise ParseError(f"unknown kind {kind!r}")
    coeffs = data.get("coeffs")
    h_coord = data.get("h_coord")
    if coeffs is None and h_coord is None:
        raise ParseError("case needs either coeffs or h_coord")
    if coeffs is not None and len(coeffs) != n:
        raise ParseError(f"expected {n} coefficient strings")
    kappa = None
    if "kappa" in data and data["kappa"] is not None:
        vec = data["kappa"]["vector"] if isinstance(data["kappa"], dict) else data["kappa"]
        kappa = tuple(Fraction(x) for x in vec)
    return CaseFile(
        case_id=str(data["case_id"]),
        q=q,
        p=p,
        m=m,
        kind=kind,
        n=n,
        coeffs=tuple(coeffs) if coeffs is not None else None,
        h_coord=h_coord,
        kappa=kappa,
        precision=data.get("precision"),
    )


def emit_case(case):
    """Canonical JSON text of a case file (sorted keys)."""
    return json.dumps(case.to_dict(), sort_keys=True)


def _max_exponent(literals):
    worst = 1
    for text in literals:
        for part in text.split("+"):
            part = part.strip()
            if "^" in part:
                try:
                    worst = max(worst, int(part.split("^")[-1]))
                except ValueError:
                    pass
            elif part.endswith("e"):
                worst = max(worst, 1)
    return worst


def default_precision(case):
    """N = 4 * (deg P + disc guess), capped; spec retry policy doubles it."""
    literals = list(case.coeffs or []) + ([case.h_coord] if case.h_coord else [])
    guess = case.n * _max_exponent(literals) + case.n
    return min(max(4 * (case.n + guess), 8), precision_cap())


def build_inputs(case, prec=None):
    """Field, datum and point objects for a case at the given precision."""
    fq = FqField(case.p, case.m)
    rd = build_root_datum(case.kind, case.n, case.p)
    N = prec or case.precision or default_precision(case)
    N = min(N, precision_cap())
    ed = None
    if case.kappa is not None:
        ed = endoscopic_datum(rd, case.kappa)
    if case.coeffs is not None:
        coeffs = [parse_series(s, fq, N) for s in case.coeffs]
        return rd, ed, LocalChar(rd, coeffs), N
    x = parse_series(case.h_coord, fq, N)
    if ed is None:
        raise ParseError("h_coord cases need a kappa specification")
    return rd, ed, HPoint(ed, x), N


def run_case(case, mode="invariants"):
    """Run one case in the given mode; PrecisionExhausted retries once at
    doubled precision.  A discriminant that still vanishes at the final
    precision classifies the case as NotRegular (a outside c-heart)."""
    prec = case.precision or default_precision(case)
    attempts = [prec]
    if 2 * prec <= precision_cap() and 2 * prec != prec:
        attempts.append(min(2 * prec, precision_cap()))
    last = None
    for attempt in attempts:
        try:
            return _run_case_at(case, mode, attempt)
        except PrecisionExhausted as ex:
            last = ex
    if case.coeffs is not None:
        try:
            rd, ed, a, N = build_inputs(case, attempts[-1])
            from .localfield import disc_valuation

            disc_valuation(a.char_poly())
        except PrecisionExhausted:
            raise NotRegular(
                f"case {case.case_id}: discriminant vanishes at precision {attempts[-1]}"
            ) from None
        except OrbintError:
            pass
    raise last


def _run_case_at(case, mode, prec):
    t0 = time.time()
    rd, ed, point, N = build_inputs(case, prec)
    if mode == "ls":
        if not isinstance(point, HPoint):
            raise OrbintError("ls mode needs an endoscopic-side case (h_coord)")
        rep = ls_check(ed, point, case_id=case.case_id)
        rep.precision = N
        return rep
    if mode == "nonstandard":
        if isinstance(point, HPoint):
            raise OrbintError("nonstandard mode needs characteristic coefficients")
        rep = nonstandard_check(point, case_id=case.case_id)
        rep.precision = N
        return rep
    if isinstance(point, HPoint):
        raise OrbintError(f"mode {mode!r} needs characteristic coefficients")
    a = point
    try:
        inv = compute_invariants(a, kappa=ed.kappa if ed else None)
    except PrecisionExhausted:
        raise
    if mode == "invariants":
        zero = Cyclotomic.zero()
        return CaseReport(
            case_id=case.case_id,
            identity="invariants",
            q=case.q,
            kind=case.kind,
            n=case.n,
            d=inv.d,
            c=inv.c,
            delta=inv.delta,
            r_v=0,
            kappa_order=ed.kappa.order if ed else 1,
            lhs=Cyclotomic.rational(inv.delta),
            rhs=Cyclotomic.rational(Fraction(inv.d - inv.c, 2)),
            passed=True,
            normalization="n/a",
            conversion=1,
            precision=N,
            seconds=time.time() - t0,
            extra={"s": inv.s, "simple_case": inv.simple_case,
                   "conductor": [list(c) for c in inv.conductor]},
        )
    if mode == "orbital":
        ov = kappa_orbital(a, ed.kappa if ed else None, invariants=inv)
        return CaseReport(
            case_id=case.case_id,
            identity="orbital",
            q=case.q,
            kind=case.kind,
            n=case.n,
            d=inv.d,
            c=inv.c,
            delta=inv.delta,
            r_v=0,
            kappa_order=ed.kappa.order if ed else 1,
            lhs=ov.value,
            rhs=ov.value,
            passed=True,
            normalization=ov.normalization.convention,
            conversion=ov.normalization.conversion,
            precision=N,
            seconds=time.time() - t0,
            extra={"vanished": ov.vanished},
        )
    raise OrbintError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# corpus generation
# ---------------------------------------------------------------------------


def _random_series_literal(rng, p, depth, force_val=None):
    terms = []
    for k in range(depth + 1):
        c = rng.randrange(p)
        if force_val is not None and k < force_val:
            c = 0
        if force_val is not None and k == force_val and c == 0:
            c = 1 + rng.randrange(p - 1)
        if c:
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c}*e")
            else:
                terms.append(f"{c}*e^{k}")
    return " + ".join(terms) if terms else "0"


def generate_corpus(seed, count, q=3, kind=SL, n=2, depth=3, mode="invariants", kappa=None):
    """Deterministic random corpus of case files.

    Coefficients are drawn uniformly at the configured depth; cases whose
    characteristic is not regular at the working precision are rejected;
    cases are deduplicated by (d, c, branch signature) first, and repeat
    signatures are only admitted once the signature pool stops producing
    new entries (keeping corpora both varied and fillable).
    """
    rng = random.Random(seed)
    p = _prime_of(q)
    m = round(math.log(q, p))
    build_root_datum(kind, n, p)  # fail fast on a bad characteristic
    candidates = []
    seen_coeffs = set()
    attempts = max(40 * count, 400)
    for _ in range(attempts):
        if len(candidates) >= 4 * count:
            break
        coeffs = []
        for i in range(n):
            if kind in (SL, PGL) and i == 0:
                coeffs.append("0")
            else:
                # bias away from unit discriminants: often force a valuation
                fv = rng.choice([None, None, 1, 1, 2, min(3, depth)])
                coeffs.append(_random_series_literal(rng, p, depth, force_val=fv))
        key = tuple(coeffs)
        if key in seen_coeffs:
            continue
        seen_coeffs.add(key)
        case = CaseFile(
            case_id="pending",
            q=q,
            p=p,
            m=m,
            kind=kind,
            n=n,
            coeffs=tuple(coeffs),
            kappa=kappa,
        )
        try:
            rd, ed, a, N = build_inputs(case)
            inv = compute_invariants(a)
        except (PrecisionExhausted, NotRegular, OrbintError):
            continue
        sig = (inv.d, inv.c, tuple(sorted((e, f) for e, f, _ in inv.branch_data.arithmetic)))
        candidates.append((sig, case))
    # one representative per signature first, then the rest in draw order
    seen_sig = set()
    first, rest = [], []
    for sig, case in candidates:
        if sig in seen_sig:
            rest.append(case)
        else:
            seen_sig.add(sig)
            first.append(case)
    chosen = (first + rest)[:count]
    if len(chosen) < count:
        raise OrbintError(f"corpus generation stalled at {len(chosen)}/{count}")
    out = []
    for i, case in enumerate(chosen):
        case.case_id = f"corpus-{seed}-{i:04d}"
        out.append(case)
    return out


def _prime_of(q):
    d = 2
    while d * d <= q:
        if q % d == 0:
            return d
        d += 1
    return q


def run_corpus(seed, count, mode="invariants", **ranges):
    """Generate and run a corpus; per-case errors are recorded and the run
    continues.  Reports are ordered by case id."""
    cases = generate_corpus(seed, count, mode=mode, **ranges)
    reports = []
    errors = []
    for case in cases:
        try:
            reports.append(run_case(case, mode=mode))
        except OrbintError as ex:
            errors.append((case.case_id, type(ex).__name__, str(ex)))
    reports.sort(key=lambda r: r.case_id)
    return reports, errors


# ---------------------------------------------------------------------------
# global formula evaluators
# ---------------------------------------------------------------------------


def global_formulas(rd, g, degD):
    """dim A, dim P_a and the delta ceiling for a datum over a curve of
    genus g with a divisor of degree degD (degD > 2g - 2 required)."""
    if degD <= 2 * g - 2:
        raise HypothesisViolated(f"degD = {degD} must exceed 2g - 2 = {2 * g - 2}")
    nphi = rd.num_roots
    r = rd.rank
    if (nphi * degD) % 2 != 0:
        raise HypothesisViolated("num_roots * degD must be even")
    dimA = nphi * degD // 2 + r * (1 - g + degD)
    dimPa = nphi * degD // 2 + r * (g - 1)
    delta_sum_bound = nphi * degD // 2
    return {"dimA": dimA, "dimPa": dimPa, "delta_sum_bound": delta_sum_bound}


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def reports_to_jsonl(reports):
    lines = []
    for r in reports:
        lines.append(json.dumps(r.to_json_dict(), sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(
            [
                r.case_id,
                r.q,
                r.kind,
                r.n,
                r.d,
                r.c,
                r.delta,
                r.r_v,
                r.kappa_order,
                str(r.lhs),
                str(r.rhs),
                "true" if r.passed else "false",
            ]
        )
    return buf.getvalue()


def canonical_report_hash(reports):
    """Hash of the canonical JSON with the timing field removed."""
    h = hashlib.sha256()
    for r in reports:
        d = r.to_json_dict()
        d.pop("timing", None)
        h.update(json.dumps(d, sort_keys=True).encode())
    return h.hexdigest()
