"""Right modules over an :class:`~skewalg.algebra.Algebra`.

A module of dimension ``n`` stores one ``n x n`` matrix per algebra basis
element; vectors are rows and act by ``m . a = m @ M_a`` so that
``M_{ab} = M_a @ M_b``.  Homomorphisms are matrices ``X`` with
``M_a X = X N_a``.
"""
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import exactla as la
from .algebra import (Algebra, Undecided, YES, NO, PROBABLY_YES, DEFAULT_BUDGET, radical,
                      quotient, center, split_commutative, lift_idempotent, is_division_algebra,
                      idempotent_from_element)
from .scalars import DEFAULT_DEGREE_CEILING


class ModuleError(ValueError):
    pass


class ModuleRep:
    """Finite-dimensional right module; ``action[i]`` is the matrix of basis element ``i``."""

    def __init__(self, algebra, action, validate=True):
        A = algebra
        F = A.field
        self.algebra = A
        self.field = F
        T = np.asarray(action)
        if T.size == 0:
            n = T.shape[1] if T.ndim == 3 else 0
            T = F.zeros((A.dim, n, n))
        elif T.dtype != F.dtype:
            T = F.array(T)
        if T.ndim != 3 or T.shape[0] != A.dim or T.shape[1] != T.shape[2]:
            raise ModuleError(f"action must have shape ({A.dim}, n, n), got {T.shape}")
        self.dim = T.shape[1]
        self.action = T
        self._flat = np.ascontiguousarray(T.reshape(A.dim, self.dim * self.dim))
        self._gen_mats = None
        self._cache = {}
        if validate:
            self.validate()

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, algebra_dim={self.algebra.dim})"

    def __eq__(self, other):
        return (isinstance(other, ModuleRep) and self.algebra is other.algebra
                and np.array_equal(self.action, other.action))

    __hash__ = object.__hash__

    def act(self, x):
        """Matrix of the algebra element with coordinates ``x``."""
        n = self.dim
        if self.algebra.dim == 0:
            return self.field.zeros((n, n))
        return la.matmul(self.field, x, self._flat).reshape(n, n)

    def generator_matrices(self):
        if self._gen_mats is None:
            self._gen_mats = [self.act(g) for g in self.algebra.generators()]
        return self._gen_mats

    def validate(self):
        A, F, n, d = self.algebra, self.field, self.dim, self.algebra.dim
        if n == 0 or d == 0:
            return
        if not np.array_equal(self.act(A.unit), F.eye(n)):
            raise ModuleError("the unit does not act as the identity")
        # M_{b g} = M_b M_g for every basis element b and generator g
        stacked = self.action.reshape(d * n, n)
        for g, Mg in zip(A.generators(), self.generator_matrices()):
            lhs = la.matmul(F, A.right_matrix(g), self._flat)
            rhs = la.matmul(F, stacked, Mg).reshape(d, n * n)
            if not np.array_equal(lhs, rhs):
                raise ModuleError("action matrices violate the right-module law")

    # -- constructions

    def submodule(self, rows, validate=True):
        """Submodule spanned by ``rows`` together with embedding and projection data."""
        return Submodule.from_rows(self, rows, validate)

    def restrict_along(self, B, phi):
        """Restriction along an algebra map ``B -> A`` given by its ``dim B x dim A`` matrix."""
        F, n = self.field, self.dim
        T = la.matmul(F, phi, self._flat).reshape(B.dim, n, n) if B.dim else F.zeros((0, n, n))
        return ModuleRep(B, T, validate=False)


def regular_module(A):
    """``A`` as a right module over itself: ``M_b`` is right multiplication by ``b``."""
    T = np.stack([A.right_basis_matrix(j) for j in range(A.dim)]) if A.dim else A.field.zeros((0, 0, 0))
    return ModuleRep(A, T, validate=False)


def direct_sum(*mods):
    if not mods:
        raise ModuleError("direct sum of nothing")
    A = mods[0].algebra
    F = A.field
    for M in mods:
        if M.algebra is not A:
            raise ModuleError("direct sum of modules over different algebras")
    T = np.stack([la.block_diag(F, [M.action[i] for M in mods]) for i in range(A.dim)])
    return ModuleRep(A, T, validate=False)


def zero_module(A):
    return ModuleRep(A, A.field.zeros((A.dim, 0, 0)), validate=False)


@dataclass
class Submodule:
    """A submodule with basis rows ``embedding`` (k x n) and a projection (n x k)."""
    module: ModuleRep
    embedding: object
    projection: Optional[object]
    parent: ModuleRep

    @classmethod
    def from_rows(cls, M, rows, validate=True):
        F = M.field
        V = la.row_space(F, np.asarray(rows).reshape(-1, M.dim))
        B, piv = V.basis, list(V.pivots)
        k = V.dim
        d = M.algebra.dim
        if k == 0:
            return cls(zero_module(M.algebra), B, F.zeros((M.dim, 0)), M)
        T = F.zeros((d, k, k))
        for i in range(d):
            img = la.matmul(F, B, M.action[i])
            T[i] = img[:, piv]
            if validate and not np.array_equal(la.matmul(F, T[i], B), img):
                raise ModuleError("subspace is not a submodule")
        return cls(ModuleRep(M.algebra, T, validate=False), B, None, M)


def summand_from_idempotent(M, X):
    """Image of an idempotent endomorphism ``X`` with embedding and projection."""
    F = M.field
    sub = Submodule.from_rows(M, X, validate=False)
    piv = list(la.row_space(F, X).pivots)
    sub.projection = np.ascontiguousarray(X[:, piv]) if piv else F.zeros((M.dim, 0))
    return sub


# ---------------------------------------------------------------- hom spaces

class HomSpace:
    """Basis of ``Hom(source, target)``, canonical in RREF as flattened vectors."""

    def __init__(self, source, target, basis_flat):
        self.source = source
        self.target = target
        self.field = source.field
        m, n = source.dim, target.dim
        self.space = la.Subspace(self.field, m * n, basis_flat)
        self.basis = [row.reshape(m, n) for row in self.space.basis]

    @property
    def dim(self):
        return self.space.dim

    def __len__(self):
        return self.dim

    def coords(self, X):
        return self.space.coords(np.asarray(X).reshape(-1))

    def element(self, coeffs):
        m, n = self.source.dim, self.target.dim
        if self.dim == 0:
            return self.field.zeros((m, n))
        return la.matmul(self.field, np.asarray(coeffs), self.space.basis).reshape(m, n)

    def contains(self, X):
        return self.space.contains(np.asarray(X).reshape(-1))

    def __eq__(self, other):
        return (isinstance(other, HomSpace) and self.source is other.source
                and self.target is other.target and self.space == other.space)


def is_homomorphism(M, N, X):
    F = M.field
    return all(np.array_equal(la.matmul(F, Mg, X), la.matmul(F, X, Ng))
               for Mg, Ng in zip(M.generator_matrices(), N.generator_matrices()))


def hom_space(M, N):
    """All module maps ``M -> N`` by spinning module generators of ``M``.

    The images of a generating set of ``M`` are the unknowns.  Spinning the
    generators through the algebra generators expresses the image of every
    vector as a linear function of the unknowns; each linear dependency met
    along the way yields constraints.
    """
    if M.algebra is not N.algebra:
        raise ModuleError("modules over different algebras")
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return HomSpace(M, N, F.zeros((0, m * n)))
    gm, gn = M.generator_matrices(), N.generator_matrices()
    ech = la.EchelonBasis(F, m)
    images = []       # per echelon row: (r*n) x n matrix, image = vec(W) @ Phi
    gens = []         # indices of module generators
    constraints = []
    queue = []

    def pad(Phi, r):
        if Phi.shape[0] == r * n:
            return Phi
        out = F.zeros((r * n, n))
        out[:Phi.shape[0]] = Phi
        return out

    def insert(v, Phi):
        res, coeffs = ech.reduce(v)
        r = len(gens)
        Phi = pad(Phi, r)
        for c, Ik in zip(coeffs, images):
            if c != 0:
                Phi = la.sub(F, Phi, la.scale(F, c, pad(Ik, r)))
        if la.is_zero(res):
            if not la.is_zero(Phi):
                constraints.append(Phi)
            return
        _, inv = ech.insert_reduced(res)
        images.append(la.scale(F, inv, Phi))
        queue.append(len(images) - 1)

    for i in range(m):
        if len(ech) == m:
            break
        e = F.basis_vector(m, i)
        res, _ = ech.reduce(e)
        if la.is_zero(res):
            continue
        gens.append(i)
        r = len(gens)
        Phi = F.zeros((r * n, n))
        Phi[(r - 1) * n:r * n] = F.eye(n)
        insert(e, Phi)
        while queue:
            k = queue.pop()
            row, Phi_k = ech.rows[k], images[k]
            for Mg, Ng in zip(gm, gn):
                insert(la.matmul(F, row, Mg), la.matmul(F, Phi_k, Ng))
    r = len(gens)
    if constraints:
        C = np.concatenate([pad(c, r) for c in constraints], axis=1)
        K = la.left_kernel(F, C)
    else:
        K = F.eye(r * n)
    if K.shape[0] == 0:
        return HomSpace(M, N, F.zeros((0, m * n)))
    E = ech.matrix()
    Einv = la.inverse(F, E)
    Phi_all = np.concatenate([pad(P, r) for P in images], axis=1)  # (r n) x (m n)
    Y = la.matmul(F, K, Phi_all)  # h x (m n); row = stacked images of echelon rows
    h = Y.shape[0]
    X = np.stack([la.matmul(F, Einv, Y[t].reshape(m, n)) for t in range(h)])
    hs = HomSpace(M, N, X.reshape(h, m * n))
    for B in hs.basis:
        if not is_homomorphism(M, N, B):
            raise AssertionError("hom space basis element fails to intertwine")
    return hs


def _end_hom(M):
    if "end_hom" not in M._cache:
        M._cache["end_hom"] = hom_space(M, M)
    return M._cache["end_hom"]


def end_algebra(M):
    """``End(M)`` with product ``phi * psi = phi o psi`` (apply ``psi`` first).

    On row-vector matrices this product is ``X_psi @ X_phi``; with this
    choice ``End(A_A)`` is isomorphic to ``A`` through left multiplication.
    """
    if "end" in M._cache:
        return M._cache["end"]
    F = M.field
    H = _end_hom(M)
    k = H.dim
    n = M.dim
    prods = F.zeros((k * k, n * n))
    for i, Xi in enumerate(H.basis):
        for j, Xj in enumerate(H.basis):
            prods[i * k + j] = la.matmul(F, Xj, Xi).reshape(-1)
    c = H.space.coords_many(prods).reshape(k, k, k) if k else F.zeros((0, 0, 0))
    unit = H.coords(F.eye(M.dim)) if k else F.zeros((0,))
    E = Algebra(F, c, unit, [f"phi{i}" for i in range(k)], validate=False)
    E.hom_space = H
    M._cache["end"] = E
    return E


def end_element_matrix(M, coeffs):
    return _end_hom(M).element(coeffs)


# ----------------------------------------------------- projectives and simples

def projective(A, vertex):
    """``P(i) = e_i A`` for a path algebra, basis = paths starting at ``i``."""
    if A.path_basis is None:
        raise ModuleError("projective() needs a path algebra")
    Q = A.path_basis.quiver
    if vertex not in Q.vertices:
        raise ModuleError(f"unknown vertex {vertex!r}")
    rows = [A.basis(k) for k, (s, _) in enumerate(A.path_basis.paths) if s == vertex]
    return Submodule.from_rows(regular_module(A), np.array(rows, dtype=A.field.dtype),
                               validate=False).module


def right_ideal_module(A, e):
    """``eA`` as a right module (``e`` idempotent)."""
    rows = A.left_matrix(e)
    return Submodule.from_rows(regular_module(A), rows, validate=False).module


def simple_module(A, vertex):
    """Simple top of ``P(i)`` for a path algebra: ``e_i`` acts by 1, everything else by 0."""
    if A.path_basis is None:
        raise ModuleError("simple_module() needs a path algebra")
    F = A.field
    k = A.path_basis.trivial_index(vertex)
    T = F.zeros((A.dim, 1, 1))
    T[k, 0, 0] = F.one
    return ModuleRep(A, T)


def quiver_representation(A, dims, arrow_maps, validate=True):
    """Module over a path algebra from vertex dimensions and arrow matrices.

    ``dims`` maps vertices to dimensions and ``arrow_maps`` maps arrow names
    to ``dims[source] x dims[target]`` matrices, so that paths act left to right.
    """
    if A.path_basis is None:
        raise ModuleError("quiver_representation() needs a path algebra")
    F = A.field
    pb = A.path_basis
    Q = pb.quiver
    offs, n = {}, 0
    for v in Q.vertices:
        offs[v] = n
        n += int(dims.get(v, 0))
    maps = []
    for name, s, t in Q.arrows:
        X = F.array(arrow_maps[name]) if dims.get(s, 0) and dims.get(t, 0) \
            else F.zeros((dims.get(s, 0), dims.get(t, 0)))
        if X.shape != (dims.get(s, 0), dims.get(t, 0)):
            raise ModuleError(f"arrow {name!r} needs a {dims.get(s, 0)} x {dims.get(t, 0)} matrix")
        maps.append(X)
    T = F.zeros((A.dim, n, n))
    for k, (src, arrs) in enumerate(pb.paths):
        cur = F.eye(dims.get(src, 0))
        for ai in arrs:
            cur = la.matmul(F, cur, maps[ai])
        tgt = pb.target(k)
        r0, c0 = offs[src], offs[tgt]
        T[k, r0:r0 + cur.shape[0], c0:c0 + cur.shape[1]] = cur
    return ModuleRep(A, T, validate=validate)


def vertex_spaces(M):
    """Bases (RREF rows) of ``M e_i`` for the vertex idempotents of the algebra."""
    A = M.algebra
    if A.vertex_idempotents is None:
        raise ModuleError("algebra has no vertex idempotents")
    return [(lab, la.row_space(M.field, M.act(e)).basis) for lab, e in A.vertex_idempotents]


# ----------------------------------------------------------------------- Ext

@dataclass
class Ext1Result:
    dim: int
    cocycles: list  # per basis element: dict arrow name -> matrix M_s x N_t


def ext1_hereditary(M, N):
    """``Ext^1(M, N)`` over an acyclic path algebra.

    Cokernel of ``(f_i) -> (f_s N_a - M_a f_t)_{a: s -> t}`` from
    ``prod_i Hom(M e_i, N e_i)`` to ``prod_a Hom(M e_s, N e_t)``.
    """
    A = M.algebra
    if A.path_basis is None:
        raise ModuleError("ext1_hereditary needs a path algebra")
    if N.algebra is not A:
        raise ModuleError("modules over different algebras")
    F = A.field
    Q = A.path_basis.quiver
    Ms = dict(vertex_spaces(M))
    Ns = dict(vertex_spaces(N))

    def restricted(R, basis_src, basis_tgt, mat):
        # matrix of v -> v @ mat from span(basis_src) to span(basis_tgt)
        img = la.matmul(F, basis_src, mat)
        piv = list(la.row_space(F, basis_tgt).pivots) if basis_tgt.shape[0] else []
        return img[:, piv] if piv else F.zeros((basis_src.shape[0], 0))

    arrows = []
    for ai, (name, s, t) in enumerate(Q.arrows):
        av = A.basis(A.path_basis.arrow_index(name))
        arrows.append((name, s, t, restricted(M, Ms[s], Ms[t], M.act(av)),
                       restricted(N, Ns[s], Ns[t], N.act(av))))
    # domain coordinates: f_i flattened, concatenated over vertices
    dom_off, off = {}, 0
    for v in Q.vertices:
        dom_off[v] = off
        off += Ms[v].shape[0] * Ns[v].shape[0]
    dom = off
    cod_off, off = [], 0
    for name, s, t, _, _ in arrows:
        cod_off.append(off)
        off += Ms[s].shape[0] * Ns[t].shape[0]
    cod = off
    D = F.zeros((dom, cod))
    for v in Q.vertices:
        ms, ns = Ms[v].shape[0], Ns[v].shape[0]
        for idx in range(ms * ns):
            f = F.zeros((ms * ns,))
            f[idx] = F.one
            f = f.reshape(ms, ns)
            row = F.zeros((cod,))
            for k, (name, s, t, Ma, Na) in enumerate(arrows):
                val = None
                if s == v:
                    val = la.matmul(F, f, Na)
                if t == v:
                    term = la.matmul(F, Ma, f)
                    val = la.scale(F, F(-1), term) if val is None else la.sub(F, val, term)
                if val is not None:
                    row[cod_off[k]:cod_off[k] + val.size] = val.reshape(-1)
            D[dom_off[v] + idx] = row
    img = la.row_space(F, D) if dom else la.Subspace(F, cod)
    cocycles = []
    pivset = set(img.pivots)
    for j in range(cod):
        if j in pivset:
            continue
        vec = F.basis_vector(cod, j)
        entry = {}
        for k, (name, s, t, _, _) in enumerate(arrows):
            ms, nt = Ms[s].shape[0], Ns[t].shape[0]
            entry[name] = vec[cod_off[k]:cod_off[k] + ms * nt].reshape(ms, nt)
        cocycles.append(entry)
    return Ext1Result(cod - img.dim, cocycles)


# ------------------------------------------------------------ decomposition

@dataclass
class IndecomposabilityVerdict:
    status: str
    idempotent: object = None  # idempotent endomorphism matrix when status is "no"
    reason: str = ""


def _find_quotient_idempotent(B, seed, budget, degree_ceiling):
    """Nontrivial idempotent of a semisimple algebra ``B`` or a primitivity verdict."""
    F = B.field
    if B.dim <= 1:
        return YES, None, "one-dimensional endomorphism quotient"
    Z = center(B)
    comps = split_commutative(Z.algebra, seed=seed, budget=budget, degree_ceiling=degree_ceiling)
    if len(comps) > 1:
        return NO, la.matmul(F, comps[0], Z.inclusion), "central idempotent"
    verdict = is_division_algebra(B, seed=seed, budget=budget, degree_ceiling=degree_ceiling)
    if verdict.status == NO:
        e = verdict.idempotent
        if e is None and verdict.witness is not None:
            e = idempotent_from_element(B, verdict.witness[0], seed=seed,
                                        degree_ceiling=degree_ceiling)
        if e is None:
            raise Undecided("zero divisor found but no idempotent could be extracted")
        return NO, e, verdict.reason
    return verdict.status, None, verdict.reason


def is_indecomposable(M, seed=0, budget=DEFAULT_BUDGET, degree_ceiling=DEFAULT_DEGREE_CEILING):
    F = M.field
    if M.dim == 0:
        return IndecomposabilityVerdict(NO, None, "zero module")
    key = ("indec", seed, budget)
    if key in M._cache:
        return M._cache[key]
    E = end_algebra(M)
    J = radical(E)
    Qt = quotient(E, J, validate=False)
    status, ebar, reason = _find_quotient_idempotent(Qt.algebra, seed, budget, degree_ceiling)
    if status != NO:
        out = IndecomposabilityVerdict(status, None, reason)
    else:
        e = lift_idempotent(E, la.matmul(F, ebar, Qt.section))
        X = E.hom_space.element(e)
        out = IndecomposabilityVerdict(NO, X, reason)
    M._cache[key] = out
    return out


@dataclass
class Piece:
    module: ModuleRep
    embedding: object   # k x n, rows span the piece inside M
    projection: object  # n x k
    status: str
    cls: int = -1


@dataclass
class IsoVerdict:
    isomorphic: bool
    map: object = None
    reason: str = ""
    status: str = YES


@dataclass
class KrsDecomposition:
    module: ModuleRep
    pieces: list
    classes: list          # representative pieces, one per iso class
    multiplicities: list
    status: str
    isomorphisms: list = dc_field(default_factory=list)  # per piece: class rep -> piece
    inverse_isomorphisms: list = dc_field(default_factory=list)

    @property
    def summands(self):
        return [(p.module, m) for p, m in zip(self.classes, self.multiplicities)]

    def signature(self):
        return sorted((p.module.dim, m) for p, m in zip(self.classes, self.multiplicities))


def _split_pieces(M, seed, budget, degree_ceiling):
    F = M.field
    out = []
    stack = [(M, F.eye(M.dim), F.eye(M.dim))]
    while stack:
        N, emb, proj = stack.pop()
        if N.dim == 0:
            continue
        v = is_indecomposable(N, seed=seed, budget=budget, degree_ceiling=degree_ceiling)
        if v.status != NO:
            out.append(Piece(N, emb, proj, v.status))
            continue
        X = v.idempotent
        for Y in (X, la.sub(F, F.eye(N.dim), X)):
            sub = summand_from_idempotent(N, Y)
            stack.append((sub.module, la.matmul(F, sub.embedding, emb),
                          la.matmul(F, proj, sub.projection)))
    out.sort(key=lambda p: (p.module.dim, tuple(la.row_space(F, p.embedding).pivots)))
    return out


def _invertible_in(H, rng, budget):
    F = H.field
    tried = list(H.basis)
    k = H.dim
    for i in range(k):
        for j in range(i + 1, k):
            tried.append(la.add(F, H.basis[i], H.basis[j]))
    for X in tried:
        if la.is_invertible(F, X):
            return X
    for _ in range(budget):
        X = H.element(F.random_array(rng, (k,), bound=5))
        if la.is_invertible(F, X):
            return X
    return None


def iso_test(M, N, seed=0, budget=DEFAULT_BUDGET, degree_ceiling=DEFAULT_DEGREE_CEILING):
    """Decide ``M = N`` with an explicit isomorphism or a certificate of failure."""
    if M.algebra is not N.algebra:
        raise ModuleError("modules over different algebras")
    F = M.field
    if M.dim != N.dim:
        return IsoVerdict(False, None, "dimension mismatch")
    if M.dim == 0:
        return IsoVerdict(True, F.zeros((0, 0)), "zero modules")
    H = hom_space(M, N)
    if H.dim == 0:
        return IsoVerdict(False, None, "no nonzero homomorphisms")
    rng = np.random.default_rng(seed)
    X = _invertible_in(H, rng, budget)
    if X is not None:
        return IsoVerdict(True, X, "invertible homomorphism")
    v = is_indecomposable(M, seed=seed, budget=budget, degree_ceiling=degree_ceiling)
    if v.status != NO:
        # End(M) local: an isomorphism exists iff some basis map is invertible
        return IsoVerdict(False, None, "every basis map is singular and End(source) is local",
                          v.status)
    dm = krs_decompose(M, seed, budget, degree_ceiling)
    dn = krs_decompose(N, seed, budget, degree_ceiling)
    match = _match_classes(dm, dn, seed, budget, degree_ceiling)
    if match is None:
        return IsoVerdict(False, None, "Krull-Schmidt multisets differ",
                          PROBABLY_YES if PROBABLY_YES in (dm.status, dn.status) else YES)
    return IsoVerdict(True, _assemble_iso(dm, dn, match), "summand-wise isomorphism")


def _match_classes(dm, dn, seed, budget, degree_ceiling):
    if sorted(dm.multiplicities) != sorted(dn.multiplicities) or len(dm.classes) != len(dn.classes):
        return None
    used = set()
    match = []
    for a, ma in zip(dm.classes, dm.multiplicities):
        for b_idx, (b, mb) in enumerate(zip(dn.classes, dn.multiplicities)):
            if b_idx in used or ma != mb or a.module.dim != b.module.dim:
                continue
            v = iso_test(a.module, b.module, seed, budget, degree_ceiling)
            if v.isomorphic:
                used.add(b_idx)
                match.append((b_idx, v.map))
                break
        else:
            return None
    return match


def _assemble_iso(dm, dn, match):
    """Block isomorphism ``M -> N`` from per-class isomorphisms."""
    F = dm.module.field
    n = dm.module.dim
    X = F.zeros((n, n))
    # group pieces of N by class to hand out in order
    avail = {}
    for idx, p in enumerate(dn.pieces):
        avail.setdefault(p.cls, []).append(idx)
    for idx, p in enumerate(dm.pieces):
        b_cls, phi = match[p.cls]
        q_idx = avail[b_cls].pop(0)
        q = dn.pieces[q_idx]
        # piece of M -> rep_M -> rep_N -> piece of N
        to_rep = dm.inverse_isomorphisms[idx]
        from_rep = dn.isomorphisms[q_idx]
        local = la.mat_chain(F, to_rep, phi, from_rep)
        X = la.add(F, X, la.mat_chain(F, p.projection, local, q.embedding))
    return X


def krs_decompose(M, seed=0, budget=DEFAULT_BUDGET, degree_ceiling=DEFAULT_DEGREE_CEILING):
    """Krull-Schmidt decomposition with explicit embeddings and projections."""
    key = ("krs", seed, budget)
    if key in M._cache:
        return M._cache[key]
    F = M.field
    pieces = _split_pieces(M, seed, budget, degree_ceiling)
    classes, mults, isos = [], [], []
    for p in pieces:
        for ci, rep in enumerate(classes):
            if rep.module.dim != p.module.dim:
                continue
            v = iso_test(rep.module, p.module, seed, budget, degree_ceiling)
            if v.isomorphic:
                p.cls = ci
                mults[ci] += 1
                isos.append(v.map)
                break
        else:
            p.cls = len(classes)
            classes.append(p)
            mults.append(1)
            isos.append(F.eye(p.module.dim))
    status = PROBABLY_YES if any(p.status == PROBABLY_YES for p in pieces) else YES
    inv_isos = [la.inverse(F, X) for X in isos]
    out = KrsDecomposition(M, pieces, classes, mults, status, isos, inv_isos)
    M._cache[key] = out
    return out
