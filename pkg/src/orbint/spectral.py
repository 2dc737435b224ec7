"""Local invariants of a characteristic a in c(O): the order B = O[t]/P,
its normalization, and the invariants d, c, s, delta, pi_0, radicial
valuations, unit indices, endoscopic transfer and resultant valuation.

delta is always computed two ways -- as (d - c)/2 and as dim(B-flat/B) in
the truncated module model -- and the two must agree (Inconsistent
otherwise).  This keeps the dimension formula running as a permanent
cross-check rather than a one-off test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    Inconsistent,
    NotGRegular,
    OrbintError,
    PrecisionExhausted,
    Unsupported,
    UnsupportedH,
)
from .localfield import (
    BranchData,
    branch_disc_valuation,
    disc_valuation,
    factor_tame,
    poly_mul,
)
from .modmodel import OrderModel
from .rootdata import GL, PGL, SL, CoinvariantClasses, FinAbGroup, RootDatum
from .series import TruncSeries

# ---------------------------------------------------------------------------
# characteristics
# ---------------------------------------------------------------------------


@dataclass
class LocalChar:
    """A point a in c(O): characteristic polynomial coefficients a_1..a_n.

    P(a,t) = t^n - a_1 t^(n-1) + a_2 t^(n-2) - ... + (-1)^n a_n.
    For SL and PGL the trace coordinate a_1 is identically zero (Lie
    algebra model; PGL points are represented by their trace-zero lift,
    legitimate since p does not divide n).
    """

    rd: RootDatum
    coeffs: list  # TruncSeries a_1..a_n

    def __post_init__(self):
        n = self.rd.n
        if len(self.coeffs) != n:
            raise OrbintError(f"expected {n} coefficients")
        if self.rd.kind in (SL, PGL) and n >= 2:
            if self.coeffs[0].valuation() is not None:
                raise OrbintError("trace coordinate must vanish for SL/PGL")

    @property
    def field(self):
        return self.coeffs[0].field

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    def char_poly(self):
        """P(a,t) as a coefficient list, low to high."""
        n = self.rd.n
        field = self.field
        prec = self.prec
        P = [None] * (n + 1)
        P[n] = TruncSeries.one(field, prec)
        for k in range(1, n + 1):
            sgn = -1 if k % 2 else 1
            c = self.coeffs[k - 1].truncate(prec)
            P[n - k] = c * sgn if sgn == 1 else -c
        return P


def companion_point(a):
    """Companion matrix of P(a,t): the Kostant-style base point gamma_0.

    Returned as an n x n list of TruncSeries; char poly reproduces P."""
    P = a.char_poly()
    n = len(P) - 1
    field = a.field
    prec = a.prec
    zero = TruncSeries.zero(field, prec)
    one = TruncSeries.one(field, prec)
    mat = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(1, n):
        mat[i][i - 1] = one
    for i in range(n):
        mat[i][n - 1] = -P[i]
    return mat


def matrix_char_poly(mat):
    """det(t*I - M) computed by exact expansion (n <= 4)."""
    n = len(mat)
    field = mat[0][0].field
    prec = min(c.prec for row in mat for c in row)
    one = TruncSeries.one(field, prec)
    zero = TruncSeries.zero(field, prec)

    # polynomial entries: represent as lists of TruncSeries in t
    def entry(i, j):
        base = [-mat[i][j].truncate(prec)]
        if i == j:
            base.append(one)
        return base

    def pm(Pa, Pb):
        out = [zero] * (len(Pa) + len(Pb) - 1)
        for x, ca in enumerate(Pa):
            for y, cb in enumerate(Pb):
                out[x + y] = out[x + y] + ca * cb
        return out

    def pa(Pa, Pb):
        m = max(len(Pa), len(Pb))
        out = []
        for k in range(m):
            s = zero
            if k < len(Pa):
                s = s + Pa[k]
            if k < len(Pb):
                s = s + Pb[k]
            out.append(s)
        return out

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = [zero]
        for j in range(len(rows)):
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = pm(rows[0][j], det(minor))
            if j % 2:
                term = [-c for c in term]
            total = pa(total, term)
        return total

    rows = [[entry(i, j) for j in range(n)] for i in range(n)]
    return det(rows)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


@dataclass
class LocalInvariants:
    d: int
    s: int
    c: int
    delta: int
    pi0_rank: int
    pi0: FinAbGroup
    radicial: dict          # root pair (i, j) -> Fraction
    simple_case: bool
    branch_data: BranchData
    order_model: OrderModel
    conductor: list
    level: int


@dataclass
class OrderData:
    """The order B inside its normalization, in the truncated model.

    embed holds the echelon basis of the image of the monomial basis of B
    in B-flat (one block per cluster); its corank is delta.  conductor
    carries per-branch eta exponents, grouped by cluster.
    """

    model: OrderModel
    embed: list
    conductor_exponent: list
    delta: int

    @property
    def flat_dim(self):
        return sum(m.total_dim for m in self.model.models)


def order_data(inv):
    """OrderData view of the invariants' truncated module model."""
    om = inv.order_model
    return OrderData(
        model=om,
        embed=[m.b_image for m in om.models],
        conductor_exponent=list(inv.conductor),
        delta=inv.delta,
    )


def inertia_slot_permutation(bd):
    """The tame inertia generator as a permutation of eigenvalue slots."""
    perm = []
    for b in bd.branches:
        base = b.slots[0]
        for j in range(b.e):
            perm.append(base + (j + 1) % b.e)
    return perm


def _matrix_rank_q(mat):
    """Rank of an integer matrix over Q (fraction-free elimination)."""
    A = [list(map(Fraction, row)) for row in mat]
    rank = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = None
        for i in range(rank, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        A[rank] = [x / A[rank][c] for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def monodromy_defect(rd, bd):
    """c = rank(X_*) - rank of inertia invariants, from the tame generator."""
    if rd.n > 3 and rd.kind in (SL, PGL):
        raise Unsupported("inertia defect for SL/PGL scoped to n <= 3")
    perm = inertia_slot_permutation(bd)
    M = rd.perm_action_matrix(perm)
    r = rd.cochar_rank()
    MI = [[M[i][j] - (1 if i == j else 0) for j in range(r)] for i in range(r)]
    return _matrix_rank_q(MI)


def pi0_group(rd, bd):
    """pi_0 of the connected-model symmetry group: (X_*) inertia coinvariants."""
    perm = inertia_slot_permutation(bd)
    M = rd.perm_action_matrix(perm)
    return CoinvariantClasses(rd.cochar_rank(), [M])


def radicial_valuations(a, bd=None):
    """r(alpha_ij) = val(root_i - root_j) over the eigenvalue slots."""
    bd = bd or factor_tame(a.char_poly())
    out = {}
    for (i, j) in a.rd.root_pairs:
        slots = bd.slot_list()
        out[(i, j)] = bd.root_val_diff(slots[i], slots[j])
    return out


def pick_level(d, n):
    """Initial truncation level for the order model.

    The conductor always fits below level delta + 1 <= d/2 + 1; the level
    is raised on PrecisionExhausted by the caller."""
    return max(2, d // 2 + 2)


def compute_invariants(a, kappa=None):
    """All local invariants of a; delta is cross-checked two ways."""
    P = a.char_poly()
    try:
        d = disc_valuation(P)
    except PrecisionExhausted:
        raise
    bd = factor_tame(P)
    d_oracle = branch_disc_valuation(bd)
    if d != d_oracle:
        raise Inconsistent(f"disc valuation mismatch: {d} vs {d_oracle}")
    s = bd.num_geometric
    n = a.rd.n
    if a.rd.kind == GL:
        c = n - s
        c_inertia = monodromy_defect(a.rd, bd)
        if c != c_inertia:
            raise Inconsistent("c = r - s disagrees with the inertia rank drop")
    else:
        c = monodromy_defect(a.rd, bd)
    if (d - c) % 2 != 0:
        raise Inconsistent("d - c must be even")
    delta_formula = (d - c) // 2
    level = pick_level(d, n)
    om = None
    while True:
        om = OrderModel(bd, level)
        try:
            conductor = om.conductor_profiles()
            break
        except PrecisionExhausted:
            level += 2
            if level > d + 4:
                raise
    delta_dim = om.delta
    if delta_dim != delta_formula:
        raise Inconsistent(
            f"delta mismatch: dim(Bflat/B) = {delta_dim}, (d-c)/2 = {delta_formula}"
        )
    cc = pi0_group(a.rd, bd)
    rad = radicial_valuations(a, bd)
    total = sum(rad.values(), Fraction(0))
    if total != d:
        raise Inconsistent("radicial valuations do not sum to d")
    simple = _detect_simple(a, bd, d, c, rad, kappa)
    pi0_rank = cc.group.free_rank
    if a.rd.kind == GL and pi0_rank != s:
        raise Inconsistent("pi0 rank must equal s for GL")
    return LocalInvariants(
        d=d,
        s=s,
        c=c,
        delta=delta_dim,
        pi0_rank=pi0_rank,
        pi0=cc.group,
        radicial=rad,
        simple_case=simple,
        branch_data=bd,
        order_model=om,
        conductor=conductor,
        level=level,
    )


def _detect_simple(a, bd, d, c, rad, kappa):
    if d != 2 or c != 0:
        return False
    ones = [(pair, v) for pair, v in rad.items() if v == 1]
    if len(ones) != 2:
        return False
    if kappa is None:
        return True
    (i, j), _ = ones[0]
    return kappa.value(a.rd.coroot(i, j)) != 0


def detect_simple_case(a, ed):
    """d = 2, c = 0, and kappa does not kill the distinguished coroot."""
    inv = compute_invariants(a)
    if not inv.simple_case:
        return False
    ones = [pair for pair, v in inv.radicial.items() if v == 1]
    (i, j) = ones[0]
    return ed.kappa.value(a.rd.coroot(i, j)) != 0


# ---------------------------------------------------------------------------
# unit indices and Neron constants
# ---------------------------------------------------------------------------


def order_residue_degrees(om, order_bases=None):
    """Residue-field degrees of the sigma-form of an order inside B-flat.

    order_bases: per-cluster echelon bases (defaults to the image of B).
    Returns the multiset of degrees: blocks of branches not separated by
    the order's residues, grouped into sigma-cycles.
    """
    bd = om.bd
    s = bd.num_geometric
    # residue vectors: constant eta-coefficient per branch
    vecs = []
    for ci, m in enumerate(om.models):
        basis = order_bases[ci] if order_bases is not None else m.b_image
        for row in basis:
            v = [None] * s
            for bi_local, b in enumerate(m.branches):
                v[b] = row[m.offsets[bi_local]]
            vecs.append((ci, v))
    # blocks: branches i ~ j if every residue vector agrees there
    # (only branches in the same cluster can be identified)
    parent = list(range(s))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ci, m in enumerate(om.models):
        for xi in range(len(m.branches)):
            for xj in range(xi + 1, len(m.branches)):
                bi, bj = m.branches[xi], m.branches[xj]
                same = True
                for cj, v in vecs:
                    if cj != ci:
                        continue
                    x, y = v[bi], v[bj]
                    if (x is None) != (y is None) or (x is not None and x != y):
                        same = False
                        break
                if same:
                    pi, pj = find(bi), find(bj)
                    if pi != pj:
                        parent[pj] = pi
    blocks = {}
    for i in range(s):
        blocks.setdefault(find(i), []).append(i)
    block_of = {i: find(i) for i in range(s)}
    # sigma-cycles on blocks
    reps = sorted(blocks)
    seen = set()
    degrees = []
    for r in reps:
        if r in seen:
            continue
        cyc = 0
        cur = r
        while cur not in seen:
            seen.add(cur)
            cyc += 1
            cur = block_of[bd.frobenius[blocks[cur][0]]]
        degrees.append(cyc)
    return tuple(sorted(degrees))


def unit_group_order(q, dim, res_degrees):
    """#R^x for a finite F_q-algebra of the given dimension and residue
    degrees: (prod (q^g - 1)) * q^(dim - sum g)."""
    tot = 1
    for g in res_degrees:
        tot *= q ** g - 1
    return tot * q ** (dim - sum(res_degrees))


def unit_index(inv, q):
    """#((B-flat)^x / B^x) over F_q: exact, from the filtration structure.

    Equals q^(delta + sum g_B - sum g_flat) * prod(q^f - 1)/prod(q^g - 1);
    validated against exhaustive unit enumeration in the tests.
    """
    om = inv.order_model
    flat_deg = order_residue_degrees(om, [_flat_basis(m) for m in om.models])
    b_deg = order_residue_degrees(om)
    num = 1
    for f in flat_deg:
        num *= q ** f - 1
    den = 1
    for g in b_deg:
        den *= q ** g - 1
    e = inv.delta + sum(b_deg) - sum(flat_deg)
    val = Fraction(num * q ** max(e, 0), den * q ** max(-e, 0))
    if val.denominator != 1:
        raise Inconsistent("unit index must be an integer")
    return int(val)


def _flat_basis(m):
    from .modmodel import rref

    vecs = []
    for i in range(len(m.branches)):
        for k in range(m.dims[i]):
            v = [m.K.zero] * m.total_dim
            v[m.offsets[i] + k] = m.K.one
            vecs.append(tuple(v))
    ech, _ = rref(vecs, m.total_dim, m.K)
    return ech


def _sl2_branch_type(inv):
    """'elliptic' | 'split' | 'ramified' for an SL2/PGL2 characteristic."""
    bd = inv.branch_data
    if inv.d == 0:
        return "regular"
    if bd.num_geometric == 1:
        return "ramified"
    if bd.frobenius[0] == 1:
        return "elliptic"
    return "split"


def neron_conversion(inv, rd, q):
    """#(J^{flat,0}(O)/J^0(O))(k): the Neron normalization constant.

    GL and PGL use the unit index (scalars already lie in B); for SL_2 the
    closed forms by branch type are used (validated by enumeration in the
    tests).  SL_n with n >= 3 is out of the supported counting scope.
    """
    if inv.delta == 0:
        return 1
    if rd.kind in (GL, PGL):
        return unit_index(inv, q)
    if rd.kind == SL:
        if rd.n != 2:
            raise Unsupported("SL_n Neron constants scoped to n = 2")
        kind = _sl2_branch_type(inv)
        if kind == "elliptic":
            return (q + 1) * q ** (inv.delta - 1)
        if kind == "split":
            return (q - 1) * q ** (inv.delta - 1)
        return q ** inv.delta
    raise Unsupported(f"unknown kind {rd.kind}")


# ---------------------------------------------------------------------------
# endoscopic transfer
# ---------------------------------------------------------------------------


@dataclass
class HPoint:
    """A point of c_H(O) for the supported endoscopic shapes.

    For H = G: a LocalChar of the parent datum.
    For the SL2 elliptic torus: a single series x (torus coordinate); the
    transfer sends x to the characteristic with eigenvalues +-sqrt(u) x.
    For Levi blocks in GL_n: per-block coefficient lists.
    """

    ed: object
    data: object


def canonical_nonresidue(q_field):
    """Least non-square in F_q (canonical element order)."""
    squares = {(x * x).c for x in q_field.elements() if x}
    for k in range(1, q_field.q):
        x = q_field.from_int_index(k)
        if x.c not in squares:
            return x
    raise OrbintError("no non-residue found (q = 2?)")


def transfer_a(ed, a_H):
    """The transfer nu: c_H -> c on the supported shapes."""
    rd = ed.parent
    if ed.H_kind == "G":
        return a_H.data if isinstance(a_H, HPoint) else a_H
    if ed.H_kind == "torus" and rd.kind == SL and rd.n == 2:
        x = a_H.data if isinstance(a_H, HPoint) else a_H
        field = x.field
        u = canonical_nonresidue(field)
        a2 = -(x * x) * u
        zero = TruncSeries.zero(field, x.prec)
        a = LocalChar(rd, [zero, a2])
        try:
            disc_valuation(a.char_poly())
        except PrecisionExhausted:
            raise NotGRegular("transfer image has unresolved discriminant")
        return a
    if ed.H_kind == "levi" and rd.kind == GL:
        blocks = a_H.data if isinstance(a_H, HPoint) else a_H
        field = blocks[0][0].field if blocks and blocks[0] else None
        polys = []
        for blk_coeffs in blocks:
            n_b = len(blk_coeffs)
            prec = min(c.prec for c in blk_coeffs)
            P = [None] * (n_b + 1)
            P[n_b] = TruncSeries.one(field, prec)
            for k in range(1, n_b + 1):
                sgn = -1 if k % 2 else 1
                P[n_b - k] = blk_coeffs[k - 1] * sgn
            polys.append(P)
        prod = polys[0]
        for Pb in polys[1:]:
            prod = poly_mul(prod, Pb)
        n = len(prod) - 1
        coeffs = []
        for k in range(1, n + 1):
            sgn = -1 if k % 2 else 1
            coeffs.append(prod[n - k] * sgn)
        a = LocalChar(rd, coeffs)
        try:
            disc_valuation(a.char_poly())
        except PrecisionExhausted:
            raise NotGRegular("transfer image is not G-regular at precision")
        return a
    raise UnsupportedH(f"transfer not implemented for H_kind={ed.H_kind}")


def h_disc_valuation(ed, a_H):
    """d_H(a_H): 0 for a torus, else the H-side discriminant valuation."""
    if ed.H_kind == "torus":
        return 0
    if ed.H_kind == "G":
        a = a_H.data if isinstance(a_H, HPoint) else a_H
        return disc_valuation(a.char_poly())
    if ed.H_kind == "levi":
        blocks = a_H.data if isinstance(a_H, HPoint) else a_H
        total = 0
        for blk_coeffs in blocks:
            if len(blk_coeffs) < 2:
                continue
            n_b = len(blk_coeffs)
            field = blk_coeffs[0].field
            prec = min(c.prec for c in blk_coeffs)
            P = [None] * (n_b + 1)
            P[n_b] = TruncSeries.one(field, prec)
            for k in range(1, n_b + 1):
                sgn = -1 if k % 2 else 1
                P[n_b - k] = blk_coeffs[k - 1] * sgn
            total += disc_valuation(P)
        return total
    raise UnsupportedH(ed.H_kind)


def resultant_valuation_transfer(ed, a_H):
    """r_v = (d_G(nu(a_H)) - d_H(a_H)) / 2, an exact integer."""
    a = transfer_a(ed, a_H)
    dG = disc_valuation(a.char_poly())
    dH = h_disc_valuation(ed, a_H)
    if (dG - dH) % 2 != 0:
        raise Inconsistent("d_G - d_H is odd; discriminant identity violated")
    return (dG - dH) // 2


# spec-facing name for the transfer-side operation (the polynomial-level
# resultant valuation lives in localfield)
resultant_valuation = resultant_valuation_transfer
