"""Finite module models for the order B = O[t]/P inside its normalization.

Everything happens in truncations of B-flat = prod_i K[[eta_i]] over the
working field K of a BranchData.  A module vector is a tuple of K-element
tuples, one truncated eta-series per geometric branch; the B-action is
multiplication by the branch roots (t) and by eta^{e_i} (epsilon).

Branches are grouped into clusters (branches whose roots collide mod the
maximal ideal); B splits as a product over clusters, so lattice work is
done per cluster and assembled by outer product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CombinatorialBlowup, Inconsistent, PrecisionExhausted

ENUM_GUARD = 10 ** 7


# ---------------------------------------------------------------------------
# linear algebra over K (row echelon over the working finite field)
# ---------------------------------------------------------------------------


def rref(rows, width, field):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [tuple(row) for row in mat[:r]], pivots


def in_span(echelon, pivots, vec):
    """Reduce vec against an echelon basis; True iff it lies in the span."""
    v = list(vec)
    for row, c in zip(echelon, pivots):
        if v[c]:
            f = v[c]
            v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


def reduce_mod(echelon, pivots, vec):
    v = list(vec)
    for row, c in zip(echelon, pivots):
        if v[c]:
            f = v[c]
            v = [a - f * b for a, b in zip(v, row)]
    return tuple(v)


# ---------------------------------------------------------------------------
# cluster model
# ---------------------------------------------------------------------------


@dataclass
class ClusterModel:
    """Finite model of one cluster of B inside its normalization.

    branches: indices into the parent BranchData.
    level: epsilon truncation level L; branch i is modelled by
    K[[eta_i]] / eta_i^(e_i * L).
    """

    bd: object
    branches: tuple
    level: int

    def __post_init__(self):
        bd = self.bd
        self.K = bd.K
        self.dims = [bd.branches[b].e * self.level for b in self.branches]
        self.offsets = []
        off = 0
        for d in self.dims:
            self.offsets.append(off)
            off += d
        self.total_dim = off
        self.rank = sum(bd.branches[b].e for b in self.branches)
        self._build_action()
        self._build_b_image()

    # vectors are flat tuples of K elements of length total_dim

    def zero_vec(self):
        return (self.K.zero,) * self.total_dim

    def unit_vec(self):
        """The element 1 of B-flat."""
        v = [self.K.zero] * self.total_dim
        for off in self.offsets:
            v[off] = self.K.one
        return tuple(v)

    def _branch_series(self, bi_local, series):
        """Pad/truncate a branch eta-series into the flat component."""
        d = self.dims[bi_local]
        c = list(series.c[:d])
        c += [self.K.zero] * (d - len(c))
        return c

    def mult_by_branchwise(self, vec, branch_series):
        """Multiply a vector by an element given as one series per branch."""
        out = []
        for i, _ in enumerate(self.branches):
            d = self.dims[i]
            off = self.offsets[i]
            a = vec[off : off + d]
            b = branch_series[i]
            prod = [self.K.zero] * d
            for x, ax in enumerate(a):
                if ax:
                    for y in range(d - x):
                        by = b[y] if y < len(b) else self.K.zero
                        if by:
                            prod[x + y] = prod[x + y] + ax * by
            out.extend(prod)
        return tuple(out)

    def _build_action(self):
        bd = self.bd
        self.t_series = []
        self.tnil_series = []
        self.eps_series = []
        # all branch roots in one cluster share their residue constant
        self.residue_point = bd.branches[self.branches[0]].root.c[0]
        for i, b in enumerate(self.branches):
            br = bd.branches[b]
            root = self._branch_series(i, br.root)
            self.t_series.append(root)
            nil = list(root)
            nil[0] = nil[0] - self.residue_point
            self.tnil_series.append(nil)
            eps = [self.K.zero] * self.dims[i]
            if br.e < self.dims[i]:
                eps[br.e] = self.K.one
            self.eps_series.append(eps)

    def mult_t(self, vec):
        return self.mult_by_branchwise(vec, self.t_series)

    def mult_tnil(self, vec):
        """Multiplication by t minus the cluster residue point (nilpotent)."""
        return self.mult_by_branchwise(vec, self.tnil_series)

    def mult_eps(self, vec):
        return self.mult_by_branchwise(vec, self.eps_series)

    def _build_b_image(self):
        """Echelon basis of the image of B = O[t]/P in the truncated model."""
        vecs = []
        cur = self.unit_vec()
        for _ in range(self.rank):
            v = cur
            for _ in range(self.level):
                vecs.append(v)
                v = self.mult_eps(v)
            cur = self.mult_t(cur)
        self.b_image, self.b_pivots = rref(vecs, self.total_dim, self.K)

    def delta(self):
        return self.total_dim - len(self.b_image)

    def conductor_profile(self):
        """Smallest (c_i) with prod eta_i^{c_i} * B-flat inside B (eta units).

        Returns per-branch eta exponents; PrecisionExhausted if the level
        is too small to contain the conductor.
        """
        out = []
        for i in range(len(self.branches)):
            d = self.dims[i]
            off = self.offsets[i]
            found = None
            for c in range(d + 1):
                ok = True
                for k in range(c, d):
                    v = [self.K.zero] * self.total_dim
                    v[off + k] = self.K.one
                    if not in_span(self.b_image, self.b_pivots, tuple(v)):
                        ok = False
                        break
                if ok:
                    found = c
                    break
            if found is None or found >= d:
                if self.delta() == 0 and found == 0:
                    out.append(0)
                    continue
                raise PrecisionExhausted("conductor not contained at this level")
            out.append(found)
        return tuple(out)

    # -- lattice enumeration -------------------------------------------------

    def _quotient_maps(self):
        cond = self.conductor_profile()
        qdims = list(cond)
        qoffs = []
        off = 0
        for d in qdims:
            qoffs.append(off)
            off += d
        qtotal = off

        def project(vec):
            out = []
            for i in range(len(self.branches)):
                out.extend(vec[self.offsets[i] : self.offsets[i] + qdims[i]])
            return tuple(out)

        def lift(qvec):
            out = [self.K.zero] * self.total_dim
            for i in range(len(self.branches)):
                for k in range(qdims[i]):
                    out[self.offsets[i] + k] = qvec[qoffs[i] + k]
            return tuple(out)

        return cond, qtotal, project, lift

    def full_from_quotient(self, basis, cond, lift):
        """Full-model echelon (with conductor tail) from a quotient basis."""
        vecs = [lift(v) for v in basis]
        for i in range(len(self.branches)):
            for k in range(cond[i], self.dims[i]):
                v = [self.K.zero] * self.total_dim
                v[self.offsets[i] + k] = self.K.one
                vecs.append(tuple(v))
        ech, piv = rref(vecs, self.total_dim, self.K)
        return tuple(ech), tuple(piv)

    def enumerate_submodules(self, guard=ENUM_GUARD):
        """All B-submodules L with conductor * B-flat <= L <= B-flat,
        as full-model echelon bases (conductor included)."""
        cond, qtotal, project, lift = self._quotient_maps()

        def act_t(qvec):
            return project(self.mult_t(lift(qvec)))

        def act_tnil(qvec):
            return project(self.mult_tnil(lift(qvec)))

        def act_eps(qvec):
            return project(self.mult_eps(lift(qvec)))

        quotient_bases = all_submodules_generic(
            self.K, qtotal, [act_t, act_eps], nilpotents=[act_tnil, act_eps], guard=guard
        )
        return [self.full_from_quotient(b, cond, lift) for b in quotient_bases]

    def enumerate_orders(self, guard=ENUM_GUARD):
        """All orders B <= O' <= B-flat, as full-model echelon bases.

        Enumerates B-submodules of (B-flat/c) containing the image of B
        and keeps those closed under multiplication.
        """
        cond, qtotal, project, lift = self._quotient_maps()
        bq = [project(v) for v in self.b_image]
        bech, bpiv = rref(bq, qtotal, self.K)

        # work in W = Q / B-image: coordinates on the free positions
        free = [c for c in range(qtotal) if c not in bpiv]
        wdim = len(free)

        def w_lift(wvec):
            v = [self.K.zero] * qtotal
            for x, c in zip(wvec, free):
                v[c] = x
            return reduce_mod(bech, bpiv, tuple(v))

        def w_proj(qvec):
            r = reduce_mod(bech, bpiv, qvec)
            return tuple(r[c] for c in free)

        def act_t(wvec):
            return w_proj(project(self.mult_t(lift(w_lift(wvec)))))

        def act_tnil(wvec):
            return w_proj(project(self.mult_tnil(lift(w_lift(wvec)))))

        def act_eps(wvec):
            return w_proj(project(self.mult_eps(lift(w_lift(wvec)))))

        out = []
        for wbasis in all_submodules_generic(
            self.K, wdim, [act_t, act_eps], nilpotents=[act_tnil, act_eps], guard=guard
        ):
            vecs = [lift(w_lift(w)) for w in wbasis] + [lift(v) for v in bq]
            ech, piv = self.full_from_quotient(
                [tuple(v) for v in vecs if any(v)], cond, lambda x: x
            )
            # ring check: products of basis vectors stay inside
            if self._is_ring(ech, piv):
                out.append((ech, piv))
        return out

    def _is_ring(self, ech, piv):
        for i, v in enumerate(ech):
            bv = [list(v[self.offsets[k] : self.offsets[k] + self.dims[k]]) for k in range(len(self.branches))]
            for w in ech[i:]:
                prod = self.mult_by_branchwise(w, bv)
                if not in_span(ech, piv, prod):
                    return False
        return True

    def min_val_profile(self, ech_basis):
        """Per-branch minimal eta valuation of a submodule (None if zero)."""
        out = []
        for i in range(len(self.branches)):
            off, d = self.offsets[i], self.dims[i]
            best = None
            for row in ech_basis:
                for k in range(d):
                    if row[off + k]:
                        best = k if best is None else min(best, k)
                        break
            out.append(best)
        return tuple(out)

    def dim_quotient(self, ech_basis):
        """dim_K(B-flat-model / L)."""
        return self.total_dim - len(ech_basis)


def all_submodules_generic(field, dim, actions, nilpotents=None, guard=ENUM_GUARD):
    """All subspaces of field^dim stable under the given action maps.

    actions: stability generators (callables on coordinate tuples).
    nilpotents: generators of the radical of the action algebra (default:
    the actions themselves, correct only when they act nilpotently).
    Socle candidates are vectors killed into the span by every radical
    generator; each candidate is closed under the full action before
    dedup, so semisimple directions (nonzero residue eigenvalues, mixed
    residue points) are handled.  BFS, deterministic order, zero included.
    """
    nilpotents = nilpotents if nilpotents is not None else actions
    start = tuple()
    if dim == 0:
        return [start]
    seen = {start}
    work = [start]
    out = []
    count = 0
    while work:
        basis = work.pop()
        out.append(basis)
        count += 1
        if count > guard:
            raise CombinatorialBlowup("submodule enumeration guard tripped")
        rows = [list(r) for r in basis]
        ech, piv = rref(rows, dim, field) if rows else ([], [])
        for v in _socle_candidates_generic(field, dim, ech, piv, nilpotents):
            closure = _close_under(field, dim, list(ech) + [v], actions)
            key = tuple(closure)
            if key not in seen:
                seen.add(key)
                work.append(key)
    return out


def _close_under(field, dim, vecs, actions):
    """Echelon basis of the smallest action-stable span containing vecs."""
    ech, piv = rref(vecs, dim, field)
    frontier = list(ech)
    while frontier:
        new = []
        for v in frontier:
            for act in actions:
                img = reduce_mod(ech, piv, act(v))
                if any(img):
                    new.append(img)
        if not new:
            break
        ech, piv = rref(list(ech) + new, dim, field)
        frontier = new
    return ech


def _socle_candidates_generic(field, dim, ech, piv, nilpotents):
    """Vectors v outside the span with every radical generator sending v
    into the span, one representative per projective point."""
    free = [c for c in range(dim) if c not in piv]
    if not free:
        return []
    gens = []
    for c in free:
        v = [field.zero] * dim
        v[c] = field.one
        gens.append(reduce_mod(ech, piv, tuple(v)))
    rows = []
    for g in gens:
        row = []
        for act in nilpotents:
            row.extend(reduce_mod(ech, piv, act(g)))
        rows.append(row)
    kern = _kernel_basis(rows, field)
    cands = []
    for coeffs in _projective_points(kern, field):
        v = [field.zero] * dim
        for x, g in zip(coeffs, gens):
            if x:
                v = [a + x * b for a, b in zip(v, g)]
        if any(v):
            cands.append(tuple(v))
    return cands


def _kernel_basis(rows, field):
    """Basis of the kernel of the linear map given by row vectors."""
    n = len(rows)
    if n == 0:
        return []
    width = len(rows[0])
    # transpose: solve x * rows = 0 -> kernel of matrix with columns rows[i]
    mat = [[rows[i][j] for i in range(n)] for j in range(width)]
    ech, piv = rref(mat, n, field)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for c in free:
        v = [field.zero] * n
        v[c] = field.one
        for row, pc in zip(ech, piv):
            if row[c]:
                v[pc] = -row[c]
        basis.append(tuple(v))
    return basis


def _projective_points(basis, field):
    """One representative per projective point of the span of basis.

    Standard enumeration: leading coefficient 1 at the first position,
    (q^k - 1)/(q - 1) points total, no dedup pass needed.
    """
    if not basis:
        return
    k = len(basis)
    n = len(basis[0])
    if (field.q ** k - 1) // (field.q - 1) > ENUM_GUARD:
        raise CombinatorialBlowup("too many socle candidates")
    for lead in range(k):
        for idx in itertools.product(range(field.q), repeat=k - lead - 1):
            v = list(basis[lead])
            for pos, i in enumerate(idx):
                if i:
                    x = field.from_int_index(i)
                    b = basis[lead + 1 + pos]
                    v = [a + x * c for a, c in zip(v, b)]
            yield tuple(v)


# ---------------------------------------------------------------------------
# full module model (all clusters)
# ---------------------------------------------------------------------------


@dataclass
class OrderModel:
    """The full truncated model of B inside B-flat over K, with Frobenius.

    level: epsilon truncation level shared by all branches.
    """

    bd: object
    level: int

    def __post_init__(self):
        bd = self.bd
        self.K = bd.K
        self.clusters = _cluster_partition(bd)
        self.models = [ClusterModel(bd, tuple(cl), self.level) for cl in self.clusters]
        self.delta = sum(m.delta() for m in self.models)
        self.s = bd.num_geometric

    def conductor_profiles(self):
        return [m.conductor_profile() for m in self.models]

    def frobenius_vec(self, cluster_idx_vecs):
        """Apply sigma to a family of per-cluster vectors.

        sigma permutes branches (and hence clusters); coefficients are
        raised to the q-th power and the branch series twisted by
        eta -> zeta^{-a} eta per the recorded Frobenius twists, so that
        rational elements of B-flat are exactly the fixed vectors.
        """
        bd = self.bd
        q = bd.base.q
        out = [None] * len(self.models)
        for ci, m in enumerate(self.models):
            vec = cluster_idx_vecs[ci]
            img_branch = bd.frobenius[m.branches[0]]
            cj = self._cluster_of_branch(img_branch)
            mj = self.models[cj]
            new = [self.K.zero] * mj.total_dim
            for bi_local, b in enumerate(m.branches):
                e = bd.branches[b].e
                a = bd.frob_twists[b]
                tgt = bd.frobenius[b]
                t_local = mj.branches.index(tgt)
                zeta = bd.zeta(e) if e > 1 else self.K.one
                d = m.dims[bi_local]
                comp = vec[m.offsets[bi_local] : m.offsets[bi_local] + d]
                for k in range(min(d, mj.dims[t_local])):
                    x = comp[k]
                    if x:
                        tw = zeta ** ((-a * k) % e) if e > 1 else self.K.one
                        new[mj.offsets[t_local] + k] = new[mj.offsets[t_local] + k] + (x ** q) * tw
            if out[cj] is not None:
                raise Inconsistent("two clusters mapped to the same image")
            out[cj] = tuple(new)
        return out

    def _cluster_of_branch(self, b):
        for ci, cl in enumerate(self.clusters):
            if b in cl:
                return ci
        raise Inconsistent("branch not in any cluster")


@dataclass
class RationalModel:
    """sigma-fixed F_q-form of the full truncated model, for exhaustive
    unit-group oracles.  Vectors are per-cluster K-vector families; the
    basis spans the rational subring of B-flat at the truncation level."""

    om: OrderModel
    basis: list            # list of per-cluster vector families
    fq: object

    def mult(self, fam1, fam2):
        out = []
        for ci, m in enumerate(self.om.models):
            bw = [list(fam2[ci][m.offsets[i] : m.offsets[i] + m.dims[i]]) for i in range(len(m.branches))]
            out.append(m.mult_by_branchwise(fam1[ci], bw))
        return out

    def elements(self):
        """All q^dim rational elements (families), canonical order."""
        fq = self.fq
        dim = len(self.basis)
        for idx in itertools.product(range(fq.q), repeat=dim):
            fam = [list(m.zero_vec()) for m in self.om.models]
            for x, b in zip(idx, self.basis):
                if x:
                    xk = _embed_fq(self.om.K, fq, fq.from_int_index(x))
                    for ci in range(len(fam)):
                        fam[ci] = [a + xk * c for a, c in zip(fam[ci], b[ci])]
            yield [tuple(v) for v in fam]

    def residues(self, fam):
        out = []
        for ci, m in enumerate(self.om.models):
            for i in range(len(m.branches)):
                out.append(fam[ci][m.offsets[i]])
        return out

    def is_unit(self, fam):
        return all(x for x in self.residues(fam))

    def norm(self, fam):
        """N_{E/F}: product over all eigenvalue slots, an epsilon-series.

        Per branch of ramification e the tau-orbit contributes
        prod_j f(zeta^j eta), a series in eta^e = epsilon; the total norm
        is the product over branches, returned as a K-coefficient list of
        length the model level.
        """
        om = self.om
        K = om.K
        level = om.level
        total = [K.one] + [K.zero] * (level - 1)
        for ci, m in enumerate(om.models):
            for i, b in enumerate(m.branches):
                br = om.bd.branches[b]
                comp = list(fam[ci][m.offsets[i] : m.offsets[i] + m.dims[i]])
                prod = [K.one] + [K.zero] * (len(comp) - 1)
                zeta = om.bd.zeta(br.e) if br.e > 1 else K.one
                for j in range(br.e):
                    tw = [c * (zeta ** ((j * k) % br.e) if br.e > 1 else K.one) for k, c in enumerate(comp)]
                    new = [K.zero] * len(comp)
                    for x, ax in enumerate(prod):
                        if ax:
                            for y in range(len(comp) - x):
                                if tw[y]:
                                    new[x + y] = new[x + y] + ax * tw[y]
                    prod = new
                # eta^e = epsilon: keep the epsilon-integral part
                eps_part = [prod[k * br.e] if k * br.e < len(prod) else K.zero for k in range(level)]
                new_total = [K.zero] * level
                for x, ax in enumerate(total):
                    if ax:
                        for y in range(level - x):
                            if eps_part[y]:
                                new_total[x + y] = new_total[x + y] + ax * eps_part[y]
                total = new_total
        return total

    def in_b_image(self, fam):
        return all(
            in_span(m.b_image, m.b_pivots, fam[ci]) for ci, m in enumerate(self.om.models)
        )


def _embed_fq(K, fq, x):
    if fq.m == 1:
        return K.elt(x.c[0])
    raise Inconsistent("rational model needs a prime base field")


def rational_model(om):
    """Build the sigma-fixed F_q-form of the full model (prime base)."""
    bd = om.bd
    fq = bd.base
    if fq.m != 1:
        raise Inconsistent("rational model needs a prime base field")
    K = om.K
    kpow = [K.one]
    for _ in range(K.m - 1):
        kpow.append(kpow[-1] * K.gen)
    basis_vecs = []
    rows = []
    for ci, m in enumerate(om.models):
        for i in range(m.total_dim):
            for j in range(K.m):
                fam = [mm.zero_vec() for mm in om.models]
                v = [K.zero] * m.total_dim
                v[i] = kpow[j]
                fam[ci] = tuple(v)
                basis_vecs.append(fam)
                img = om.frobenius_vec(fam)
                flat = []
                for ck in range(len(om.models)):
                    for a, bv in zip(img[ck], fam[ck]):
                        d = a - bv
                        flat.extend(fq.elt(c) for c in d.c)
                rows.append(flat)
    # kernel over F_q
    n = len(rows)
    width = len(rows[0]) if rows else 0
    mat = [[rows[i][j] for i in range(n)] for j in range(width)]
    ech, piv = rref(mat, n, fq)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for c in free:
        coeff = [fq.zero] * n
        coeff[c] = fq.one
        for row, pc in zip(ech, piv):
            if row[c]:
                coeff[pc] = -row[c]
        fam = [list(mm.zero_vec()) for mm in om.models]
        for x, bv in zip(coeff, basis_vecs):
            if x:
                xk = K.elt(x.c[0])
                for ci in range(len(fam)):
                    fam[ci] = [a + xk * cc for a, cc in zip(fam[ci], bv[ci])]
        basis.append([tuple(v) for v in fam])
    return RationalModel(om, basis, fq)


def _cluster_partition(bd):
    """Partition geometric branches into clusters: roots colliding mod eta."""
    s = bd.num_geometric
    parent = list(range(s))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(s):
        for j in range(i + 1, s):
            v = bd.root_val_diff((i, 0), (j, 0))
            # any pair of tau-conjugates colliding merges the clusters
            collide = v > 0
            if not collide:
                ei = bd.branches[i].e
                for a in range(1, bd.branches[j].e):
                    if bd.root_val_diff((i, 0), (j, a)) > 0:
                        collide = True
                        break
            if collide:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pj] = pi
    groups = {}
    for i in range(s):
        groups.setdefault(find(i), []).append(i)
    return [tuple(sorted(g)) for g in sorted(groups.values())]
