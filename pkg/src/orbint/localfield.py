"""Polynomials over F_q[[e]]/e^N: discriminants, Newton polygons, Hensel
lifting, and tame factorization with the Frobenius action on branches.

A polynomial is a list of TruncSeries, low-to-high in t; inputs are monic.
Geometric roots are computed by Newton-Puiseux recursion over an
adaptively enlarged coefficient field F_{q^M}; each root is a truncated
series in a branch uniformizer eta with eta^e = epsilon exactly (tame
normalization, unit part 1).  Branch ordering is deterministic:
(e, slope, leading-coefficient key, series key).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    NotCoprime,
    OrbintError,
    PrecisionExhausted,
    WildRamification,
)
from .finitefield import (
    FqField,
    fqpoly_divmod,
    fqpoly_eval,
    fqpoly_gcd,
    fqpoly_powmod,
    fqpoly_roots,
    fqpoly_trim,
)
from .series import TruncSeries

# ---------------------------------------------------------------------------
# polynomial helpers over TruncSeries (dense lists, low-to-high)
# ---------------------------------------------------------------------------


def poly_eval(P, x):
    acc = TruncSeries.zero(x.field, x.prec)
    for c in reversed(P):
        acc = acc * x + c
    return acc


def poly_deriv(P):
    return [c * k for k, c in enumerate(P)][1:]


def poly_mul(P, Q):
    field = P[0].field
    prec = min(min(c.prec for c in P), min(c.prec for c in Q))
    out = [TruncSeries.zero(field, prec) for _ in range(len(P) + len(Q) - 1)]
    for i, a in enumerate(P):
        for j, b in enumerate(Q):
            out[i + j] = out[i + j] + a * b
    return out


def poly_sub(P, Q):
    n = max(len(P), len(Q))
    field = (P or Q)[0].field
    prec = min(
        min((c.prec for c in P), default=1 << 30),
        min((c.prec for c in Q), default=1 << 30),
    )
    z = TruncSeries.zero(field, prec)
    out = []
    for i in range(n):
        a = P[i] if i < len(P) else z
        b = Q[i] if i < len(Q) else z
        out.append(a - b)
    return out


def poly_divmod_monic(P, D):
    """Divide by a monic D; exact in the truncated ring."""
    n, m = len(P) - 1, len(D) - 1
    field = P[0].field
    prec = min(c.prec for c in P)
    R = [c.truncate(prec) for c in P]
    Q = [TruncSeries.zero(field, prec) for _ in range(max(0, n - m + 1))]
    for k in range(n - m, -1, -1):
        c = R[k + m]
        if c:
            Q[k] = c
            for j in range(m + 1):
                R[k + j] = R[k + j] - c * D[j]
    return Q, R[:m]


def poly_is_zero(P):
    return all(c.valuation() is None for c in P)


# ---------------------------------------------------------------------------
# discriminant and Newton polygon
# ---------------------------------------------------------------------------


def resultant_valuation(P, Q):
    """val(Res(P, Q)) for monic-leading P, Q via valuation-pivot elimination
    on the Sylvester matrix.  PrecisionExhausted if it cannot be resolved."""
    n, m = len(P) - 1, len(Q) - 1
    if n < 0 or m < 0:
        raise OrbintError("resultant of the zero polynomial")
    size = n + m
    if size == 0:
        return 0
    field = P[0].field
    prec = min(min(c.prec for c in P), min(c.prec for c in Q))
    z = TruncSeries.zero(field, prec)
    rows = []
    for i in range(m):
        rows.append([z] * i + [c.truncate(prec) for c in reversed(P)] + [z] * (m - 1 - i))
    for i in range(n):
        rows.append([z] * i + [c.truncate(prec) for c in reversed(Q)] + [z] * (n - 1 - i))
    total = 0
    for step in range(size):
        piv, pv = None, None
        for i in range(step, size):
            for j in range(step, size):
                v = rows[i][j].valuation()
                if v is not None and (pv is None or v < pv):
                    piv, pv = (i, j), v
        if piv is None:
            raise PrecisionExhausted("resultant vanishes at working precision")
        i0, j0 = piv
        rows[step], rows[i0] = rows[i0], rows[step]
        for r in rows:
            r[step], r[j0] = r[j0], r[step]
        total += pv
        pivot = rows[step][step]
        for i in range(step + 1, size):
            x = rows[i][step]
            if x.valuation() is not None:
                f = x / pivot
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[step])]
            else:
                newp = min(x.prec, x.prec - pv if x.prec > pv else 1)
                rows[i] = [a.truncate(min(a.prec, max(1, a.prec - pv))) for a in rows[i]]
    return total


def disc_valuation(P):
    """Valuation of disc(P) for monic P (unit factors ignored)."""
    if len(P) - 1 < 1:
        raise OrbintError("discriminant needs degree >= 1")
    if len(P) - 1 == 1:
        return 0
    return resultant_valuation(P, poly_deriv(P))


def newton_polygon(P, allow_negative=False):
    """Lower-hull segments [(slope, length)] of P, slopes as Fractions.

    A leading block of zero (at precision) coefficients is reported as a
    single segment with slope None (roots that vanish at precision).
    Unresolved coefficients must lie strictly above the hull, otherwise
    PrecisionExhausted is raised.
    """
    n = len(P) - 1
    pts, unresolved = [], []
    for i, c in enumerate(P):
        v = c.valuation()
        if v is None:
            unresolved.append((i, c.prec))
        else:
            pts.append((i, v))
    if not pts or pts[-1][0] != n:
        raise PrecisionExhausted("leading coefficient unresolved")
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x2) >= (pt[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)

    def hull_at(x):
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= x <= x2:
                return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
        return None

    for i, pr in unresolved:
        h = hull_at(i)
        if h is not None and Fraction(pr) <= h:
            raise PrecisionExhausted("polygon vertex unresolved at precision")
    segs = []
    x0 = hull[0][0]
    if x0 > 1:
        # two or more roots vanishing at precision: not separable there
        raise PrecisionExhausted("repeated zero root at working precision")
    if x0 == 1:
        segs.append((None, x0))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y1 - y2, x2 - x1)
        if slope < 0 and not allow_negative:
            raise OrbintError("negative slope on an integral polynomial")
        segs.append((slope, x2 - x1))
    return segs


# ---------------------------------------------------------------------------
# Hensel lifting (von zur Gathen-style quadratic step)
# ---------------------------------------------------------------------------


def _residue_poly(P):
    return fqpoly_trim([c.c[0] for c in P])


def _fq_mul(a, b):
    if not a or not b:
        return []
    field = a[0].field
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return fqpoly_trim(out)


def _fq_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else None
        y = b[i] if i < len(b) else None
        if x is None:
            out.append(-y)
        elif y is None:
            out.append(x)
        else:
            out.append(x - y)
    return fqpoly_trim(out)


def _fq_bezout(a, b):
    field = a[0].field
    r0, r1 = fqpoly_trim(a), fqpoly_trim(b)
    s0, s1 = [field.one], []
    t0, t1 = [], [field.one]
    while r1:
        q, r = fqpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fq_sub(s0, _fq_mul(q, s1))
        t0, t1 = t1, _fq_sub(t0, _fq_mul(q, t1))
    if len(r0) - 1 != 0:
        raise NotCoprime("polynomials are not coprime")
    inv = r0[-1].inverse()
    return [x * inv for x in s0], [x * inv for x in t0]


def _solve_correction(G, H, E):
    """Solve dg*H + dh*G = E with deg dg < deg G, deg dh < deg H.

    Valuation-pivoted elimination over the truncated series ring; raises
    PrecisionExhausted when the system cannot be solved integrally (the
    factors are not separated enough at this precision).
    """
    a, b = len(G) - 1, len(H) - 1
    size = a + b
    field = G[0].field
    prec = min(min(c.prec for c in G), min(c.prec for c in H), min(c.prec for c in E))
    z = TruncSeries.zero(field, prec)
    # unknown vector: dg coefficients (a of them) then dh coefficients (b)
    rows = [[z] * size for _ in range(size)]
    for i in range(a):  # dg_i * H contributes to coefficient i+j
        for j in range(b + 1):
            rows[i + j][i] = rows[i + j][i] + H[j].truncate(prec)
    for i in range(b):
        for j in range(a + 1):
            rows[i + j][a + i] = rows[i + j][a + i] + G[j].truncate(prec)
    rhs = []
    for i in range(size):
        rhs.append(E[i].truncate(prec) if i < len(E) else z)
    colperm = list(range(size))
    for step in range(size):
        piv, pv = None, None
        for i in range(step, size):
            for j in range(step, size):
                v = rows[i][j].valuation()
                if v is not None and (pv is None or v < pv):
                    piv, pv = (i, j), v
        if piv is None:
            raise NotCoprime("factor correction system is singular at precision")
        i0, j0 = piv
        rows[step], rows[i0] = rows[i0], rows[step]
        rhs[step], rhs[i0] = rhs[i0], rhs[step]
        for r in rows:
            r[step], r[j0] = r[j0], r[step]
        colperm[step], colperm[j0] = colperm[j0], colperm[step]
        for i in range(step + 1, size):
            x = rows[i][step]
            if x.valuation() is not None:
                f = x / rows[step][step]
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[step])]
                rhs[i] = rhs[i] - f * rhs[step]
    sol = [None] * size
    for i in range(size - 1, -1, -1):
        acc = rhs[i]
        for j in range(i + 1, size):
            acc = acc - rows[i][j] * sol[j]
        if acc.valuation() is None:
            sol[i] = TruncSeries.zero(field, max(1, acc.prec - (rows[i][i].valuation() or 0)))
        else:
            sol[i] = acc / rows[i][i]
    out = [None] * size
    for pos, var in enumerate(colperm):
        out[var] = sol[pos]
    return out[:a], out[a:]


def hensel_lift(P, factor_pair, target_precision):
    """Lift a factorization P = G*H to the target precision.

    The seed factors must be monic with product P at their stated
    precision; they need not be coprime mod e, but the error must sit
    deeper than the factor separation (quantitative Hensel).  Each Newton
    step solves the full correction system, so convergence is quadratic
    away from the separation defect.  NotCoprime is raised when the seed
    factors cannot be separated at all (e.g. equal residues with no
    valuation slack).
    """
    g0, h0 = factor_pair
    if target_precision > min(c.prec for c in P):
        raise PrecisionExhausted("target precision exceeds input precision")
    G = [c.truncate(target_precision) for c in g0]
    H = [c.truncate(target_precision) for c in h0]
    Pt = [c.truncate(target_precision) for c in P]
    rg, rh = _residue_poly(g0), _residue_poly(h0)
    coprime = len(fqpoly_gcd(rg, rh)) - 1 == 0 if rg and rh else False
    if not coprime:
        # quantitative fallback needs the factors separated at precision
        try:
            resultant_valuation(G, H)
        except PrecisionExhausted:
            raise NotCoprime("seed factors share all residue roots") from None
    last_err = -1
    for _ in range(4 * target_precision + 8):
        E = poly_sub(Pt, poly_mul(G, H))
        errv = min((c.valuation() for c in E if c.valuation() is not None), default=None)
        if errv is None:
            return G, H
        if errv <= last_err:
            if not coprime and last_err < 0:
                raise NotCoprime("seed factors are not separated at precision")
            raise PrecisionExhausted("Hensel lift stalled")
        last_err = errv
        dG, dH = _solve_correction(G, H, E)
        G = poly_sub(G, [-c for c in dG] + [TruncSeries.zero(G[0].field, target_precision)])[: len(G)]
        H = poly_sub(H, [-c for c in dH] + [TruncSeries.zero(H[0].field, target_precision)])[: len(H)]
    raise PrecisionExhausted("Hensel lift did not converge")


# ---------------------------------------------------------------------------
# Newton-Puiseux machinery
# ---------------------------------------------------------------------------


class _NeedLargerField(Exception):
    def __init__(self, factor):
        self.factor = max(2, factor)


_EMBED_CACHE = {}


def _subfield_embedding(base, K):
    """Canonical embedding F_{p^m} -> F_{p^{mM}} (generator to least root)."""
    key = (base.p, base.m, K.m)
    if key not in _EMBED_CACHE:
        mod = [K.elt(c) for c in base.modulus]
        roots = fqpoly_roots(mod, K)
        if not roots:
            raise OrbintError("subfield embedding failed")
        g_img = roots[0]

        def emb(x, _g=g_img, _K=K):
            acc = _K.zero
            for c in reversed(x.c):
                acc = acc * _g + _K.elt(c)
            return acc

        _EMBED_CACHE[key] = emb
    return _EMBED_CACHE[key]


def embed_series(series, K):
    """Embed a series over the base field into the working field K."""
    base = series.field
    if base == K:
        return series
    if base.m == 1:
        return series.map_coeffs(lambda x: K.elt(x.c[0]), K)
    emb = _subfield_embedding(base, K)
    return series.map_coeffs(emb, K)


@lru_cache(maxsize=None)
def _primitive_cache(p, m, e):
    K = FqField(p, m)
    for k in range(1, K.q):
        x = K.from_int_index(k)
        if x ** e == K.one and all(x ** (e // r) != K.one for r in set(_prime_divisors(e))):
            return x.c
    raise OrbintError(f"no element of order {e} in F_{K.q}")


def primitive_root_of_unity(K, e):
    """Lex-least element of multiplicative order exactly e in K."""
    if e == 1:
        return K.one
    if (K.q - 1) % e != 0:
        raise OrbintError(f"no mu_{e} in field of order {K.q}")
    return K.elt(_primitive_cache(K.p, K.m, e))


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def reindex_series(series, e):
    """View a u-series as a w-series with w^e = u (exponents scaled by e)."""
    if e == 1:
        return series
    out = [series.field.zero] * (series.prec * e)
    for i, c in enumerate(series.c):
        out[i * e] = c
    return TruncSeries(series.field, out, series.prec * e)


def substitute_scaled(series, scale):
    """series(scale * u) for a constant scale in the coefficient field."""
    out = []
    acc = series.field.one
    for c in series.c:
        out.append(c * acc)
        acc = acc * scale
    return TruncSeries(series.field, out, series.prec)


def _synth_div(a, w0):
    """Divide the coefficient list a by (z - w0); returns (quotient, rem)."""
    n = len(a) - 1
    q = [None] * n
    carry = a[n]
    for j in range(n - 1, -1, -1):
        q[j] = carry
        carry = a[j] + carry * w0
    return q, carry


def _poly_shift_var(P, w0):
    """P(w0 + s) as a polynomial in s (Taylor shift, synthetic division)."""
    work = list(P)
    out = []
    while work:
        if len(work) == 1:
            out.append(work[0])
            break
        work, rem = _synth_div(work, w0)
        out.append(rem)
    return out


def _newton_iterate(P, start, prec):
    field = P[0].field
    r = TruncSeries(field, [start], prec)
    dP = poly_deriv(P)
    for _ in range(2 * prec + 4):
        val = poly_eval(P, r)
        v = val.valuation()
        if v is None:
            return r
        dval = poly_eval(dP, r)
        dv = dval.valuation()
        if dv is None or dv >= v:
            raise PrecisionExhausted("Newton iteration stalled")
        r = r - val / dval
    val = poly_eval(P, r)
    if val.valuation() is not None:
        raise PrecisionExhausted("Newton iteration did not converge")
    return r


def _root_multiplicity(f, x):
    m = 0
    g = fqpoly_trim(list(f))
    while g and not fqpoly_eval(g, x):
        m += 1
        g, _ = fqpoly_divmod(g, [-x, x.field.one])
    return m


def _smallest_missing_degree(res, K):
    """Smallest degree >= 2 of an irreducible factor of res over K."""
    f = fqpoly_trim(list(res))
    while f and not f[0]:
        f = f[1:]
    f = fqpoly_gcd(f, _fq_derivative_or_self(f))
    g = fqpoly_trim(list(res))
    while g and not g[0]:
        g = g[1:]
    # work with the squarefree part of g
    d = fqpoly_gcd(g, _fq_deriv(g))
    if len(d) - 1 > 0:
        g, _ = fqpoly_divmod(g, d)
    x = [K.zero, K.one]
    xq = fqpoly_powmod(x, K.q, g)
    lin = fqpoly_gcd(_fq_sub(xq, x), g)
    if len(lin) - 1 > 0:
        g, _ = fqpoly_divmod(g, lin)
    deg = 2
    while deg <= len(g) - 1:
        xqd = fqpoly_powmod(x, K.q ** deg, g)
        if len(fqpoly_gcd(_fq_sub(xqd, x), g)) - 1 > 0:
            return deg
        deg += 1
    return max(2, len(g) - 1 if len(g) - 1 > 1 else 2)


def _fq_deriv(a):
    return fqpoly_trim([a[i] * i for i in range(1, len(a))])


def _fq_derivative_or_self(a):
    d = _fq_deriv(a)
    return d if d else a


def _puiseux_roots(P, K, p, depth=0):
    """All roots (val >= 0) of monic P over K[[u]] as (ram, series) pairs;
    ram = r means the series lives in w with w^r = u."""
    if depth > 4 * len(P) + 8:
        raise PrecisionExhausted("Puiseux recursion too deep")
    n = len(P) - 1
    roots = []
    if n == 0:
        return roots
    prec = min(c.prec for c in P)
    segs = newton_polygon(P, allow_negative=True)
    for slope, length in segs:
        if slope is None:
            if length > 1:
                raise PrecisionExhausted("repeated zero root at precision")
            roots.append((1, TruncSeries.zero(P[0].field, prec)))
            continue
        if slope < 0:
            continue  # not a root of the integral cluster under study
        h, e = slope.numerator, slope.denominator
        if p is not None and e % p == 0:
            raise WildRamification(f"ramification index {e} divisible by p={p}")
        Q = [reindex_series(c, e) for c in P] if e > 1 else [c.truncate(prec) for c in P]
        # rescale t = w^h z (w the current uniformizer after reindexing)
        Q = [c.shift(h * k) for k, c in enumerate(Q)]
        minv = min(v for v in (c.valuation() for c in Q) if v is not None)
        base_prec = min(c.prec for c in Q) - minv
        if base_prec < 1:
            raise PrecisionExhausted("segment rescale exhausted precision")
        stripped = []
        for c in Q:
            cc = c.truncate(minv + base_prec)
            stripped.append(TruncSeries(c.field, cc.c[minv:], base_prec))
        Q = stripped
        res = fqpoly_trim([c.c[0] for c in Q])
        if len(res) - 1 < 1:
            raise PrecisionExhausted("empty residual polynomial")
        rts = fqpoly_roots(res, K)
        nonzero = []
        seen = set()
        for r in rts:
            if r and r.c not in seen:
                seen.add(r.c)
                nonzero.append(r)
        zero_mult = 0
        g = list(res)
        while g and not g[0]:
            zero_mult += 1
            g = g[1:]
        counted = zero_mult + sum(_root_multiplicity(res, r) for r in nonzero)
        if counted < len(res) - 1:
            raise _NeedLargerField(_smallest_missing_degree(res, K))
        for w0 in nonzero:
            mult = _root_multiplicity(res, w0)
            if mult == 1:
                r = _newton_iterate(Q, w0, base_prec)
                roots.append((e, r.shift(h)))
            else:
                shifted = _poly_shift_var(Q, w0)
                for ram2, sr in _puiseux_roots(shifted, K, p, depth + 1):
                    v2 = sr.valuation()
                    if v2 is not None and v2 == 0:
                        continue  # belongs to another residual root's cluster
                    w0s = TruncSeries(sr.field, [w0], sr.prec)
                    rr = sr + w0s
                    roots.append((e * ram2, rr.shift(h * ram2)))
    return roots


# ---------------------------------------------------------------------------
# branch data
# ---------------------------------------------------------------------------


@dataclass
class GeometricBranch:
    """One geometric branch: a tau-orbit of Puiseux roots.

    root: canonical orbit representative, a series in eta (eta^e = eps).
    slots: global indices of the orbit members; member j is the root with
    eta -> zeta_e^j eta.
    """

    e: int
    root: TruncSeries
    slots: tuple


@dataclass
class BranchData:
    """Tame factorization data of a monic P over F_q[[e]].

    branches: geometric branches, canonically ordered.
    frobenius / frob_twists: sigma(root_i)(eta) = root_{sigma(i)}(zeta^a eta).
    arithmetic: (e, f, branch-orbit) triples, one per arithmetic factor.
    """

    base: FqField
    K: FqField
    branches: list
    frobenius: tuple
    frob_twists: tuple
    arithmetic: list
    prec: int

    @property
    def num_geometric(self):
        return len(self.branches)

    def slot_count(self):
        return sum(b.e for b in self.branches)

    def zeta(self, e):
        return primitive_root_of_unity(self.K, e)

    def slot_list(self):
        out = []
        for bi, b in enumerate(self.branches):
            for j in range(b.e):
                out.append((bi, j))
        return out

    def slot_root(self, bi, j):
        b = self.branches[bi]
        if j == 0:
            return b.root
        return substitute_scaled(b.root, self.zeta(b.e) ** j)

    def slot_frobenius(self):
        """sigma as a permutation of global slots."""
        perm = {}
        for bi, b in enumerate(self.branches):
            bj = self.frobenius[bi]
            a = self.frob_twists[bi]
            for j in range(b.e):
                # slot (bi, j) carries root_i(zeta^j eta); sigma sends it to
                # the root with coefficients relabelled: (bj, a + j*q mod e)
                perm[self.branches[bi].slots[j]] = self.branches[bj].slots[
                    (a + j * self.base.q) % b.e
                ]
        return tuple(perm[i] for i in range(self.slot_count()))

    def root_val_diff(self, s1, s2):
        """val(root(s1) - root(s2)) in epsilon units (a Fraction)."""
        (b1, j1), (b2, j2) = s1, s2
        r1, r2 = self.slot_root(b1, j1), self.slot_root(b2, j2)
        e1, e2 = self.branches[b1].e, self.branches[b2].e
        L = math.lcm(e1, e2)
        a = reindex_series(r1, L // e1)
        b = reindex_series(r2, L // e2)
        n = min(a.prec, b.prec)
        diff = a.truncate(n) - b.truncate(n)
        v = diff.valuation()
        if v is None:
            raise PrecisionExhausted("root difference unresolved at precision")
        return Fraction(v, L)


def _series_key(s):
    return tuple(x.sort_key() for x in s.c)


def _series_eq(a, b):
    n = min(a.prec, b.prec)
    return a.c[:n] == b.c[:n]


def _min_field_degree(e_list, base_q):
    M = 1
    for e in e_list:
        d = 1
        while (base_q ** d - 1) % e != 0:
            d += 1
        M = math.lcm(M, d)
    return M


def factor_tame(P, max_field_degree=24):
    """Tame factorization of a monic separable-at-precision P over F_q[[e]].

    Returns BranchData.  Raises WildRamification when p divides a
    ramification index and PrecisionExhausted when roots cannot be
    separated at the working precision.
    """
    base = P[0].field
    p = base.p
    n = len(P) - 1
    prec = min(c.prec for c in P)
    M = 1
    while True:
        if base.m * M > max_field_degree:
            raise OrbintError("required field extension too large")
        K = FqField(p, base.m * M)
        PK = [embed_series(c, K) for c in P]
        try:
            raw = _puiseux_roots(PK, K, p)
        except _NeedLargerField as ex:
            M *= ex.factor
            continue
        if len(raw) != n:
            raise PrecisionExhausted("wrong number of Puiseux roots")
        roots = []
        need_mu = set()
        for ram, series in raw:
            support = [i for i, c in enumerate(series.c) if c]
            g = math.gcd(ram, math.gcd(*support)) if support else ram
            if g > 1:
                newc = [series.c[i * g] for i in range((series.prec + g - 1) // g)]
                series = TruncSeries(K, newc, max(1, series.prec // g))
                ram //= g
            roots.append((ram, series))
            if ram > 1:
                need_mu.add(ram)
        lacking = [e for e in need_mu if (K.q - 1) % e != 0]
        if lacking:
            M *= _min_field_degree(lacking, K.q)
            continue
        try:
            return _assemble_branches(base, K, roots, prec, n)
        except _NeedLargerField as ex:
            M *= ex.factor
            continue


def _assemble_branches(base, K, roots, prec, n):
    used = [False] * len(roots)
    branches = []
    for i, (ram, series) in enumerate(roots):
        if used[i]:
            continue
        zeta = primitive_root_of_unity(K, ram)
        orbit_series = [substitute_scaled(series, zeta ** j) for j in range(ram)]
        for s2 in orbit_series:
            found = None
            for k, (ram2, sk) in enumerate(roots):
                if not used[k] and ram2 == ram and _series_eq(sk, s2):
                    found = k
                    break
            if found is None:
                raise PrecisionExhausted("tau orbit of a root is incomplete")
            used[found] = True
        rep = min(orbit_series, key=_series_key)
        branches.append((ram, rep))
    if sum(r for r, _ in branches) != n:
        raise PrecisionExhausted("branch degrees do not sum to deg P")

    def branch_key(b):
        ram, rep = b
        v = rep.valuation()
        slope = Fraction(v, ram) if v is not None else Fraction(1 << 30)
        lead = rep.c[v].sort_key() if v is not None else ()
        return (ram, slope, lead, _series_key(rep))

    branches.sort(key=branch_key)
    objs = []
    slot = 0
    for ram, rep in branches:
        objs.append(GeometricBranch(ram, rep, tuple(range(slot, slot + ram))))
        slot += ram
    q = base.q
    perm, twists = [], []
    for b in objs:
        img = b.root.frobenius(q)
        found = None
        for bj, b2 in enumerate(objs):
            if b2.e != b.e:
                continue
            zeta = primitive_root_of_unity(K, b.e)
            for a in range(b.e):
                if _series_eq(img, substitute_scaled(b2.root, zeta ** a)):
                    found = (bj, a)
                    break
            if found:
                break
        if not found:
            raise PrecisionExhausted("Frobenius image of a branch not matched")
        perm.append(found[0])
        twists.append(found[1])
    seen = [False] * len(objs)
    arith = []
    for bi in range(len(objs)):
        if seen[bi]:
            continue
        orbit, cur = [], bi
        while not seen[cur]:
            seen[cur] = True
            orbit.append(cur)
            cur = perm[cur]
        arith.append((objs[orbit[0]].e, len(orbit), tuple(sorted(orbit))))
    arith.sort()
    return BranchData(base, K, objs, tuple(perm), tuple(twists), arith, prec)


def branch_disc_valuation(bd):
    """Oracle: val(disc) = sum over ordered slot pairs of root-diff vals."""
    slots = bd.slot_list()
    total = Fraction(0)
    for i in range(len(slots)):
        for j in range(len(slots)):
            if i != j:
                total += bd.root_val_diff(slots[i], slots[j])
    if total.denominator != 1:
        raise PrecisionExhausted("non-integral discriminant valuation")
    return int(total)
