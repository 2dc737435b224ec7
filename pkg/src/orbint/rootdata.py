"""Split type-A root data, endoscopic data, and finite abelian group
computations (Smith form, coinvariants, Tate-Nakayama-style class groups).

Lattice conventions.  Cocharacters of the diagonal torus of GL_n live in
"slot" coordinates Z^n (one slot per eigenvalue).  For SL_n the cocharacter
lattice is the sum-zero sublattice with basis f_i = e_i - e_n; for PGL_n it
is the quotient Z^n / Z(1,..,1) with basis [e_1]..[e_{n-1}].  Conversion
between slot vectors and basis coordinates is provided so that branch data
(one slot per eigenvalue of the characteristic polynomial) can be paired
with characters of the cocharacter lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadCharacteristic, Inconsistent, OrbintError, UnsupportedOrder

GL, SL, PGL = "GL", "SL", "PGL"
_KINDS = (GL, SL, PGL)


# ---------------------------------------------------------------------------
# Exact integer Smith normal form with transforms
# ---------------------------------------------------------------------------


def smith_normal_form(mat, rows, cols):
    """Smith form of an integer matrix given as list of row-lists.

    Returns (diag, L, R) with L*M*R = D, L and R unimodular, and the
    diagonal entries satisfying d_1 | d_2 | ... (nonnegative).  Pivoting is
    by least absolute value; pure exact integer arithmetic throughout.
    """
    A = [list(r) for r in mat]
    L = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    R = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, c):  # row_i += c*row_j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        L[i] = [a + c * b for a, b in zip(L[i], L[j])]

    def col_op(i, j, c):  # col_i += c*col_j
        for r in range(rows):
            A[r][i] += c * A[r][j]
        for r in range(cols):
            R[r][i] += c * R[r][j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for r in range(rows):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(cols):
            R[r][i], R[r][j] = R[r][j], R[r][i]

    t = 0
    while t < min(rows, cols):
        # find pivot of least nonzero absolute value in the trailing block
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] != 0 and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, rows):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                row_op(i, t, -q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                col_op(j, t, -q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | trailing entries
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if A[i][j] % A[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, 1)
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            L[t] = [-a for a in L[t]]
        t += 1
    diag = [A[i][i] for i in range(min(rows, cols))]
    return diag, L, R


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group: Z^free_rank + sum Z/d_i."""

    free_rank: int
    torsion: tuple

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise Inconsistent("elementary divisors must form a divisor chain")
        if any(d <= 1 for d in self.torsion):
            raise Inconsistent("torsion divisors must exceed 1")

    @property
    def order(self):
        if self.free_rank:
            return None
        return math.prod(self.torsion) if self.torsion else 1

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


class CoinvariantClasses:
    """The quotient Z^rank / sum_w (w - 1) Z^rank with class labelling.

    ``class_of`` maps an integer vector to canonical coordinates in the
    quotient: first the torsion coordinates (mod d_i), then the free ones.
    """

    def __init__(self, rank, generators):
        self.rank = rank
        cols = []
        for w in generators:
            if len(w) != rank or any(len(r) != rank for r in w):
                raise OrbintError("generator matrix has wrong shape")
            for j in range(rank):
                col = [w[i][j] - (1 if i == j else 0) for i in range(rank)]
                cols.append(col)
        if cols:
            M = [[cols[j][i] for j in range(len(cols))] for i in range(rank)]
            ncols = len(cols)
        else:
            M = [[0] for _ in range(rank)] if rank else [[0]]
            ncols = 1
        if rank == 0:
            self.diag, self.L = [], []
            self.group = FinAbGroup(0, ())
            self._tor_idx, self._free_idx = [], []
            return
        diag, L, _ = smith_normal_form(M, rank, ncols)
        diag = diag + [0] * (rank - len(diag))
        self.diag = diag
        self.L = L
        self._tor_idx = [i for i, d in enumerate(diag) if d > 1]
        self._free_idx = [i for i, d in enumerate(diag) if d == 0]
        self.group = FinAbGroup(len(self._free_idx), tuple(diag[i] for i in self._tor_idx))

    def class_of(self, vec):
        """Canonical coordinates (torsion tuple, free tuple) of a vector."""
        if len(vec) != self.rank:
            raise OrbintError("vector has wrong length")
        y = [sum(self.L[i][j] * vec[j] for j in range(self.rank)) for i in range(self.rank)]
        tor = tuple(y[i] % self.diag[i] for i in self._tor_idx)
        free = tuple(y[i] for i in self._free_idx)
        return tor, free

    def torsion_class_of(self, vec):
        """Torsion class; raises Inconsistent if the free part is nonzero."""
        tor, free = self.class_of(vec)
        if any(free):
            raise Inconsistent("class expected to be torsion has free part")
        return tor


def coinvariants(lattice_rank, generators):
    """(Z^rank)_W for W generated by the given integer matrices."""
    return CoinvariantClasses(lattice_rank, generators).group


# ---------------------------------------------------------------------------
# Root data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootDatum:
    kind: str
    n: int
    p: int
    rank: int
    roots: tuple          # root vectors in X^* basis coordinates
    root_pairs: tuple     # (i, j) slot pairs, same order as `roots`
    exponents: tuple
    weyl_order: int

    @property
    def num_roots(self):
        return len(self.roots)

    # -- slot coordinates <-> cocharacter basis coordinates ------------------

    def cochar_rank(self):
        return self.rank if self.kind == GL else self.n - 1

    def slot_to_coords(self, slot):
        """Express a slot vector (length n) in the X_* basis of this kind.

        GL: identity.  SL: requires sum zero, drops the last entry.
        PGL: quotient coordinates lambda_i - lambda_n.
        """
        if len(slot) != self.n:
            raise OrbintError("slot vector has wrong length")
        if self.kind == GL:
            return tuple(slot)
        if self.kind == SL:
            if sum(slot) != 0:
                raise OrbintError("SL slot vectors must sum to zero")
            return tuple(slot[:-1])
        return tuple(s - slot[-1] for s in slot[:-1])

    def coords_to_slot(self, coords):
        if self.kind == GL:
            return tuple(coords)
        if self.kind == SL:
            return tuple(coords) + (-sum(coords),)
        return tuple(coords) + (0,)

    def perm_action_matrix(self, perm):
        """Matrix of a slot permutation acting on X_* in basis coordinates.

        perm maps slot index i to perm[i].
        """
        r = self.cochar_rank()
        cols = []
        for j in range(r):
            slot = list(self.coords_to_slot([1 if i == j else 0 for i in range(r)]))
            moved = [0] * self.n
            for i, v in enumerate(slot):
                moved[perm[i]] = v
            cols.append(self.slot_to_coords_mod(moved))
        return [[cols[j][i] for j in range(r)] for i in range(r)]

    def slot_to_coords_mod(self, slot):
        """Like slot_to_coords but PGL vectors are reduced, not validated."""
        if self.kind == SL and sum(slot) != 0:
            raise OrbintError("SL slot vectors must sum to zero")
        return self.slot_to_coords(slot) if self.kind != PGL else tuple(
            s - slot[-1] for s in slot[:-1]
        )

    def coroot(self, i, j):
        """Coroot of the root alpha_{ij}, in X_* basis coordinates."""
        slot = [0] * self.n
        slot[i] += 1
        slot[j] -= 1
        if self.kind == PGL:
            return self.slot_to_coords_mod(slot)
        return self.slot_to_coords(slot)


def build_root_datum(kind, n, p):
    """Construct the split root datum of GL_n / SL_n / PGL_n over F_p."""
    if kind not in _KINDS:
        raise OrbintError(f"unknown kind {kind!r}")
    if n < 1:
        raise OrbintError("n must be positive")
    weyl_order = math.factorial(n)
    if p < 2 or weyl_order % p == 0 or not _is_prime(p):
        raise BadCharacteristic(f"p={p} invalid: need a prime not dividing {n}!")
    pairs = tuple((i, j) for i in range(n) for j in range(n) if i != j)
    if kind == GL:
        rank = n
        exponents = tuple(range(1, n + 1))

        def char_vec(i, j):
            v = [0] * n
            v[i], v[j] = 1, -1
            return tuple(v)

    elif kind == SL:
        rank = n - 1
        exponents = tuple(range(2, n + 1))

        # X^*(T_SL) = Z^n / diag; basis dual to f_i = e_i - e_n
        def char_vec(i, j):
            v = [0] * (n - 1)
            if i < n - 1:
                v[i] += 1
            else:
                v = [x - 1 for x in v]
            if j < n - 1:
                v[j] -= 1
            else:
                v = [x + 1 for x in v]
            return tuple(v)

    else:  # PGL
        rank = n - 1
        exponents = tuple(range(2, n + 1))

        # X^*(T_PGL) = sum-zero sublattice; coordinates w.r.t. the basis
        # dual to [e_1]..[e_{n-1}]: the character e_i - e_j evaluates on
        # [e_k] as delta_ik - delta_jk.
        def char_vec(i, j):
            v = [0] * (n - 1)
            if i < n - 1:
                v[i] += 1
            if j < n - 1:
                v[j] -= 1
            return tuple(v)

    roots = tuple(char_vec(i, j) for (i, j) in pairs)
    rd = RootDatum(kind, n, p, rank, roots, pairs, exponents, weyl_order)
    if sum(exponents) != rank + len(roots) // 2:
        raise Inconsistent("exponent sum invariant violated")
    return rd


def _is_prime(x):
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# kappa and endoscopic data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaChar:
    """Finite-order character of the cocharacter lattice.

    coords: Fractions mod 1 in the X_* basis coordinates of the parent
    datum; kappa(lambda) = sum coords_i * lambda_i mod 1.
    """

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(Fraction(c) % 1 for c in self.coords)
        )

    @property
    def order(self):
        return math.lcm(*(c.denominator for c in self.coords)) if self.coords else 1

    def value(self, coords_vec):
        """kappa evaluated on a cocharacter (basis coordinates), in Q/Z."""
        return sum((c * v for c, v in zip(self.coords, coords_vec)), Fraction(0)) % 1

    def is_trivial(self):
        return all(c == 0 for c in self.coords)


@dataclass(frozen=True)
class EndoscopicDatum:
    parent: RootDatum
    kappa: KappaChar
    sub_roots: tuple      # indices into parent.roots
    H_kind: str           # "G" | "torus" | "levi"
    blocks: tuple         # slot partition into kappa-level blocks

    @property
    def num_sub_roots(self):
        return len(self.sub_roots)


def endoscopic_datum(rd, kappa):
    """Endoscopic datum for a split type-A datum and a kappa of order <= 4.

    Phi_H is the set of roots whose coroot is killed by kappa; for type A
    this is the Levi-type subsystem of a slot partition (kappa-level sets),
    the torus when no root survives, and G itself for trivial kappa.
    """
    if not isinstance(kappa, KappaChar):
        kappa = KappaChar(tuple(kappa))
    if len(kappa.coords) != rd.cochar_rank():
        raise OrbintError("kappa coordinate length must match cocharacter rank")
    if kappa.order > 4:
        raise UnsupportedOrder(f"kappa has order {kappa.order} > 4")
    sub = []
    for idx, (i, j) in enumerate(rd.root_pairs):
        if kappa.value(rd.coroot(i, j)) == 0:
            sub.append(idx)
    # slot partition: i ~ j iff kappa(coroot_{ij}) = 0 (transitive in type A)
    blocks = []
    assigned = [False] * rd.n
    for i in range(rd.n):
        if assigned[i]:
            continue
        blk = [i]
        assigned[i] = True
        for j in range(i + 1, rd.n):
            if not assigned[j] and kappa.value(rd.coroot(i, j)) == 0:
                blk.append(j)
                assigned[j] = True
        blocks.append(tuple(blk))
    if len(sub) == rd.num_roots:
        h_kind = "G"
    elif not sub:
        h_kind = "torus"
    else:
        h_kind = "levi"
    return EndoscopicDatum(rd, kappa, tuple(sub), h_kind, tuple(blocks))


def resultant_degree_global(ed, degD):
    """(#Phi - #Phi_H) * deg(D) / 2, an exact integer."""
    if degD < 0:
        raise OrbintError("degD must be nonnegative")
    diff = ed.parent.num_roots - ed.num_sub_roots
    if (diff * degD) % 2 != 0:
        raise Inconsistent("root-count difference times degree must be even")
    return diff * degD // 2


def nonstandard_pair_check(rd1, rd2, p):
    """True iff (rd1, rd2) is an isogenous type-A pair good at p.

    The interesting pair is SL_n / PGL_n (lattice index n); identical data
    form the identity isogeny (always good).
    """
    if rd1.n != rd2.n:
        return False
    if rd1.kind == rd2.kind:
        return True
    kinds = {rd1.kind, rd2.kind}
    if kinds == {SL, PGL}:
        return rd1.n % p != 0
    return False
