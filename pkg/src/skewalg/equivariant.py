"""Group actions on algebras, skew group algebras and equivariant modules.

Conventions (row vectors throughout):

* the action is on the right, ``a^g = a @ R_g`` with ``R_{gh} = R_g @ R_h``;
* a linearisation is a family of matrices ``L_g`` with ``L_g L_h = L_{gh}``
  and ``M_a L_g = L_g M_{a^g}``;
* the skew algebra has basis ``(g, b_i)`` at index ``g * dim A + i`` and
  product ``(g, a)(h, b) = (gh, a^h b)``.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import exactla as la
from .algebra import Algebra, AlgebraError
from .groups import Subgroup
from .modules import ModuleRep, HomSpace, hom_space, end_algebra, regular_module


class ActionError(AlgebraError):
    pass


class AlgebraAction:
    """Right action of a finite group on an algebra by automorphisms."""

    def __init__(self, group, algebra, matrices, validate=True):
        G, A = group, algebra
        F = A.field
        self.group = G
        self.algebra = A
        self.field = F
        mats = [F.array(m) if np.asarray(m).dtype != F.dtype else np.asarray(m) for m in matrices]
        if len(mats) != G.order:
            raise ActionError("one matrix per group element is required")
        self.matrices = tuple(mats)
        if validate:
            self.validate()

    @classmethod
    def from_generators(cls, group, algebra, gen_mats, validate=True):
        G, F = group, algebra.field
        gen_mats = [F.array(m) for m in gen_mats]
        if len(gen_mats) != len(G.generators):
            raise ActionError("one matrix per group generator is required")
        mats = [None] * G.order
        mats[G.identity] = F.eye(algebra.dim)
        for k, s, child in G.bfs_edges():
            mats[child] = la.matmul(F, mats[k], gen_mats[s])
        out = cls(group, algebra, mats, validate=False)
        if validate:
            for k in range(G.order):
                for s, gi in enumerate(G.generator_indices()):
                    if not np.array_equal(la.matmul(F, mats[k], gen_mats[s]), mats[G.mul(k, gi)]):
                        raise ActionError("generator matrices do not define a group action")
            out.validate()
        return out

    @classmethod
    def trivial(cls, group, algebra):
        F = algebra.field
        return cls(group, algebra, [F.eye(algebra.dim)] * group.order, validate=False)

    def R(self, g):
        return self.matrices[g]

    def apply(self, a, g):
        return la.matmul(self.field, a, self.matrices[g])

    def validate(self):
        G, A, F = self.group, self.algebra, self.field
        d = A.dim
        if not np.array_equal(self.matrices[G.identity], F.eye(d)):
            raise ActionError("identity element does not act trivially")
        for g in range(G.order):
            for gi in G.generator_indices():
                if not np.array_equal(la.matmul(F, self.matrices[g], self.matrices[gi]),
                                      self.matrices[G.mul(g, gi)]):
                    raise ActionError("matrices violate the right-action law R_gh = R_g R_h")
        for gi in G.generator_indices():
            self._check_automorphism(self.matrices[gi])
        if A.vertex_idempotents is not None:
            for g in range(G.order):
                self.vertex_permutation(g)

    def _check_automorphism(self, R):
        A, F, d = self.algebra, self.field, self.algebra.dim
        if d == 0:
            return
        if not la.is_invertible(F, R):
            raise ActionError("action matrix is not invertible")
        if not np.array_equal(la.matmul(F, A.unit, R), A.unit):
            raise ActionError("action does not fix the unit")
        lhs = la.matmul(F, A.structure.reshape(d * d, d), R).reshape(d, d, d)
        T1 = la.matmul(F, R, A._cL).reshape(d, d, d)  # T1[i, l, m] = sum_k R[i,k] c[k,l,m]
        for i in range(d):
            if not np.array_equal(la.matmul(F, R, T1[i]), lhs[i]):
                raise ActionError("action matrix is not multiplicative")

    def vertex_permutation(self, g):
        """Permutation of vertex idempotents induced by ``g`` (``e_i^g = e_{i.g}``)."""
        A = self.algebra
        if A.vertex_idempotents is None:
            raise ActionError("algebra has no vertex idempotents")
        idems = [e for _, e in A.vertex_idempotents]
        perm = []
        for e in idems:
            img = self.apply(e, g)
            for j, f in enumerate(idems):
                if np.array_equal(img, f):
                    perm.append(j)
                    break
            else:
                raise ActionError("action does not permute the vertex idempotents")
        if A.path_basis is not None:
            arrows = [k for k in range(A.dim) if A.path_basis.length(k) == 1]
            span = la.Subspace(self.field, A.dim, np.array([A.basis(k) for k in arrows],
                                                           dtype=self.field.dtype).reshape(-1, A.dim))
            for k in arrows:
                if not span.contains(self.apply(A.basis(k), g)):
                    raise ActionError("action does not preserve the arrow span")
        return tuple(perm)

    def vertex_action(self):
        from .groups import GroupAction
        G = self.group
        n = len(self.algebra.vertex_idempotents)
        return GroupAction(G, n, [self.vertex_permutation(g) for g in G.generator_indices()])


# -------------------------------------------------------------- skew algebra

class SkewAlgebra(Algebra):
    """``G x| A`` on pairs ``(g, a)`` with ``(g, a)(h, b) = (gh, a^h b)``."""

    def index(self, g, i):
        return g * self.base_dim + i

    def embed(self, a):
        """``a -> (e, a)``."""
        v = self.field.zeros((self.dim,))
        e = self.group.identity
        v[e * self.base_dim:(e + 1) * self.base_dim] = a
        return v

    def group_element(self, g):
        """``(g, 1)``."""
        v = self.field.zeros((self.dim,))
        v[g * self.base_dim:(g + 1) * self.base_dim] = self.action.algebra.unit
        return v

    def embedding_matrix(self):
        d = self.base_dim
        return np.stack([self.embed(self.action.algebra.basis(i)) for i in range(d)]) \
            if d else self.field.zeros((0, self.dim))


def skew_algebra(action, validate=True):
    G, A, F = action.group, action.algebra, action.field
    d, n = A.dim, G.order
    D = n * d
    c = F.zeros((D, D, D))
    for h in range(n):
        Th = la.matmul(F, action.matrices[h], A._cL).reshape(d, d, d)  # [i, j, l]
        for g in range(n):
            gh = G.mul(g, h)
            c[g * d:(g + 1) * d, h * d:(h + 1) * d, gh * d:(gh + 1) * d] = Th
    unit = F.zeros((D,))
    e = G.identity
    unit[e * d:(e + 1) * d] = A.unit
    labels = [f"({g},{A.labels[i]})" for g in range(n) for i in range(d)]
    gens = []
    for gi in G.generator_indices():
        v = F.zeros((D,))
        v[gi * d:(gi + 1) * d] = A.unit
        gens.append(v)
    for a in A.generators():
        v = F.zeros((D,))
        v[e * d:(e + 1) * d] = a
        gens.append(v)
    S = SkewAlgebra(F, c, unit, labels, validate=validate, generators=gens)
    S.action = action
    S.group = G
    S.base_dim = d
    return S


# ------------------------------------------------------- equivariant modules

class EquivariantModule:
    """A module over ``A`` with a linearisation for a subgroup ``H`` of the acting group."""

    def __init__(self, action, subgroup, underlying, lin, validate=True):
        self.action = action
        self.algebra = action.algebra
        self.field = action.field
        self.subgroup = subgroup if subgroup is not None else action.group.whole()
        self.underlying = underlying
        self.dim = underlying.dim
        F = self.field
        self.lin = {int(h): (F.array(m) if np.asarray(m).dtype != F.dtype else np.asarray(m))
                    for h, m in lin.items()}
        if validate:
            self.validate()

    @property
    def group(self):
        return self.action.group

    def __repr__(self):
        return f"EquivariantModule(dim={self.dim}, subgroup_order={self.subgroup.order})"

    def L(self, h):
        return self.lin[h]

    def validate(self):
        G, H, F, M = self.group, self.subgroup, self.field, self.underlying
        if set(self.lin) != set(H.members):
            raise ActionError("linearisation must be given on exactly the subgroup")
        if not np.array_equal(self.lin[G.identity], F.eye(self.dim)):
            raise ActionError("identity linearisation is not the identity matrix")
        for g in H.members:
            for s in H.generators:
                if not np.array_equal(la.matmul(F, self.lin[g], self.lin[s]), self.lin[G.mul(g, s)]):
                    raise ActionError("linearisation violates the cocycle condition")
        A = self.algebra
        for s in H.generators:
            Ls = self.lin[s]
            for a, Ma in zip(A.generators(), M.generator_matrices()):
                twisted = M.act(self.action.apply(a, s))
                if not np.array_equal(la.matmul(F, Ma, Ls), la.matmul(F, Ls, twisted)):
                    raise ActionError("linearisation is not compatible with the algebra action")


def canonical_linearisation(action):
    """``A`` as a module over itself with ``L_g = R_g``."""
    G = action.group
    return EquivariantModule(action, G.whole(), regular_module(action.algebra),
                             {g: action.matrices[g] for g in range(G.order)})


def to_skew_module(M, S=None):
    """Module over the skew algebra with ``m (g, a) = L_g(m) a``."""
    if not M.subgroup.is_whole():
        raise ActionError("to_skew_module needs a linearisation for the whole group")
    S = skew_algebra(M.action, validate=False) if S is None else S
    F, G, d = M.field, M.group, M.algebra.dim
    U = M.underlying
    mats = []
    for g in range(G.order):
        for i in range(d):
            mats.append(la.matmul(F, M.lin[g], U.action[i]))
    T = np.stack(mats) if mats else F.zeros((0, M.dim, M.dim))
    return ModuleRep(S, T, validate=False)


def from_skew_module(N, action=None):
    """Equivariant module with ``M_a = N_{(e,a)}`` and ``L_g = N_{(g,1)}``."""
    S = N.algebra
    action = S.action if action is None else action
    G, A = action.group, action.algebra
    T = np.stack([N.act(S.embed(A.basis(i))) for i in range(A.dim)]) if A.dim \
        else N.field.zeros((0, N.dim, N.dim))
    under = ModuleRep(A, T, validate=False)
    lin = {g: N.act(S.group_element(g)) for g in range(G.order)}
    return EquivariantModule(action, G.whole(), under, lin, validate=True)


def restrict(M, H):
    if H.parent is not M.group:
        raise ActionError("subgroup of a different group")
    if not set(H.members) <= set(M.subgroup.members):
        raise ActionError("can only restrict to a subgroup of the linearising subgroup")
    return EquivariantModule(M.action, H, M.underlying, {h: M.lin[h] for h in H.members},
                             validate=False)


def twist_by_group_element(M, g, action):
    """``g_* M``: same space, ``a`` acts as ``a^g`` did."""
    return M.restrict_along(M.algebra, action.matrices[g])


def induce(H, M):
    """Induction from ``H`` to the whole acting group over right cosets ``H r``.

    Block ``r`` of the result is the twist of ``M`` by ``r^{-1}``, and
    ``L_g`` sends block ``r`` to block ``r'`` through ``L^M_{h'}`` where
    ``r g = h' r'``.
    """
    if not isinstance(H, Subgroup) or H.parent is not M.group:
        raise ActionError("induce needs a subgroup of the acting group")
    if set(H.members) != set(M.subgroup.members):
        raise ActionError("module is not linearised over the given subgroup")
    G, F, A = M.group, M.field, M.algebra
    reps = H.coset_reps
    k, n = len(reps), M.dim
    pos = {r: t for t, r in enumerate(reps)}
    mats = []
    for i in range(A.dim):
        blocks = [M.underlying.act(M.action.apply(A.basis(i), G.inv(r))) for r in reps]
        mats.append(la.block_diag(F, blocks))
    T = np.stack(mats) if mats else F.zeros((0, k * n, k * n))
    under = ModuleRep(A, T, validate=False)
    lin = {}
    for g in range(G.order):
        L = F.zeros((k * n, k * n))
        for t, r in enumerate(reps):
            h2, r2 = H.decompose(G.mul(r, g))
            u = pos[r2]
            L[t * n:(t + 1) * n, u * n:(u + 1) * n] = M.lin[h2]
        lin[g] = L
    return EquivariantModule(M.action, G.whole(), under, lin, validate=True)


def _averaged_invariants(M, N, base):
    """Image of ``X -> |H|^-1 sum_h L_h^-1 X L'_h`` on ``base``; needs ``|H|`` invertible.

    With row-major flattening ``vec(P X Q) = vec(X) (P^T (x) Q)``, so the
    average is one matrix applied to all basis vectors at once.
    """
    F, H = M.field, M.subgroup
    G = H.parent
    pairs = [(np.ascontiguousarray(M.lin[G.inv(h)].T), N.lin[h]) for h in H.members]
    if F.char:
        total = None
        for P, Q in pairs:
            term = la.kronecker(F, P, Q)
            total = term if total is None else la.add(F, total, term)
        avg = la.scale(F, F.inv(F(H.order)), total)
        return HomSpace(M.underlying, N.underlying, la.matmul(F, base.space.basis, avg))
    # over QQ: integer arithmetic up to one overall positive scalar
    scaled = [(la.scaled_ints(P), la.scaled_ints(Q)) for P, Q in pairs]
    D = 1
    for (_, dp), (_, dq) in scaled:
        D = D * (dp * dq) // gcd(D, dp * dq)
    T = None
    for (Pi, dp), (Qi, dq) in scaled:
        term = np.kron(Pi, Qi) * (D // (dp * dq))
        T = term if T is None else T + term
    B, db = la.scaled_ints(base.space.basis)
    # trace of the projector on base = dimension of its image, exactly
    tr = sum((Fraction(int(B[i].dot(T[:, c])), db * D * H.order)
              for i, c in enumerate(base.space.pivots)), Fraction(0))
    r = int(tr)
    if r == 0:
        return HomSpace(M.underlying, N.underlying, F.zeros((0, T.shape[1])))
    rng = np.random.default_rng(0)
    for _ in range(4):
        mix = rng.integers(-3, 4, size=(r + 2, B.shape[0])).astype(object)
        small = la.int_matmul(la.int_matmul(mix, B), T)
        R, _, rk = la.rref(F, F.array(small))
        if rk == r:
            return HomSpace(M.underlying, N.underlying, R[:r])
    images = la.int_matmul(B, T)
    return HomSpace(M.underlying, N.underlying, F.array(images))


def equivariant_hom(M, N):
    """``Hom_A(M, N)^H``: intertwiners with ``L_h X = X L'_h`` for the subgroup."""
    if M.action is not N.action or set(M.subgroup.members) != set(N.subgroup.members):
        raise ActionError("equivariant modules over different data")
    F = M.field
    base = hom_space(M.underlying, N.underlying)
    m, n = M.dim, N.dim
    H = M.subgroup
    gens = H.generators
    if base.dim == 0 or not gens:
        return base
    if F.char == 0 or H.order % F.char:
        out = _averaged_invariants(M, N, base)
        if all(np.array_equal(la.matmul(F, M.lin[s], X), la.matmul(F, X, N.lin[s]))
               for X in out.basis for s in gens):
            return out
    rows = []
    for X in base.basis:
        parts = [la.sub(F, la.matmul(F, M.lin[s], X), la.matmul(F, X, N.lin[s])).reshape(-1)
                 for s in gens]
        rows.append(np.concatenate(parts))
    K = la.left_kernel(F, np.array(rows, dtype=F.dtype).reshape(base.dim, -1))
    flat = la.matmul(F, K, base.space.basis) if K.shape[0] else F.zeros((0, m * n))
    return HomSpace(M.underlying, N.underlying, flat)


def equivariant_direct_sum(*mods):
    from .modules import direct_sum
    F = mods[0].field
    under = direct_sum(*[M.underlying for M in mods])
    lin = {h: la.block_diag(F, [M.lin[h] for M in mods]) for h in mods[0].subgroup.members}
    return EquivariantModule(mods[0].action, mods[0].subgroup, under, lin, validate=False)


# ------------------------------------------------ End of an induced module

def conjugation_action(T):
    """Right action ``phi^g = L_g^{-1} X_phi L_g`` of the group on ``End_A(T)``."""
    G, F = T.group, T.field
    E = end_algebra(T.underlying)
    H = E.hom_space
    mats = []
    for g in range(G.order):
        Lg = T.lin[g]
        Li = la.inverse(F, Lg)
        rows = [H.coords(la.mat_chain(F, Li, X, Lg)) for X in H.basis]
        mats.append(np.array(rows, dtype=F.dtype).reshape(E.dim, E.dim))
    return AlgebraAction(G, E, mats)


@dataclass
class InducedEndomorphisms:
    end_algebra: Algebra        # End over the skew algebra of Ind(Res T)
    skew: SkewAlgebra           # G x| End_A(T)
    isomorphism: object         # rows: images of skew basis vectors in End coordinates
    induced: EquivariantModule


def end_of_induced(T):
    """``End(Ind_1^G Res T)`` together with an explicit isomorphism from ``G x| End_A(T)``.

    With ``W = T (x) k<G>``, the element ``(g, phi)`` acts by
    ``t (x) [x] -> phi^x(t) (x) [g x]``; ``Psi: t (x) [r] -> L_r(t) (x) [r]``
    transports this to the induced module.
    """
    if not T.subgroup.is_whole():
        raise ActionError("end_of_induced needs a linearisation over the whole group")
    G, F = T.group, T.field
    one = G.trivial_subgroup()
    Ind = induce(one, restrict(T, one))
    N = to_skew_module(Ind)
    E1 = end_algebra(N)
    conj = conjugation_action(T)
    S2 = skew_algebra(conj)
    E0 = conj.algebra
    H0 = E0.hom_space
    n, order = T.dim, G.order
    reps = one.coset_reps
    if list(reps) != list(range(order)):
        raise AssertionError("unexpected coset ordering for the trivial subgroup")
    P = la.block_diag(F, [T.lin[r] for r in range(order)])
    Pinv = la.inverse(F, P)
    rows = []
    for g in range(order):
        for i in range(E0.dim):
            X = F.zeros((n * order, n * order))
            for x in range(order):
                phix = la.mat_chain(F, la.inverse(F, T.lin[x]), H0.basis[i], T.lin[x])
                gx = G.mul(g, x)
                X[x * n:(x + 1) * n, gx * n:(gx + 1) * n] = phix
            rows.append(E1.hom_space.coords(la.mat_chain(F, P, X, Pinv)))
    Theta = np.array(rows, dtype=F.dtype).reshape(S2.dim, E1.dim)
    verify_algebra_isomorphism(S2, E1, Theta)
    return InducedEndomorphisms(E1, S2, Theta, Ind)


def verify_algebra_isomorphism(A, B, Theta):
    """Check that ``x -> x @ Theta`` is a unital, multiplicative bijection ``A -> B``."""
    F = A.field
    if Theta.shape != (A.dim, B.dim) or A.dim != B.dim:
        raise AssertionError("isomorphism has the wrong shape")
    if not la.is_invertible(F, Theta):
        raise AssertionError("algebra map is not bijective")
    if not np.array_equal(la.matmul(F, A.unit, Theta), B.unit):
        raise AssertionError("algebra map is not unital")
    d = A.dim
    images = la.matmul(F, A.structure.reshape(d * d, d), Theta).reshape(d, d, d)
    for i in range(d):
        Li = B.left_matrix(Theta[i])
        prods = la.matmul(F, Theta, Li)  # row j: Theta_i * Theta_j
        if not np.array_equal(prods, images[i]):
            raise AssertionError("algebra map is not multiplicative")
    return True
