"""Group algebras and their irreducible representations over non-closed fields.

Irreducibles are the Krull-Schmidt classes of the regular module of the
group algebra; this works uniformly over the rationals and prime fields
and records ``dim End(rho)`` for non-split cases.
"""
from dataclasses import dataclass
from math import gcd

import numpy as np

from . import exactla as la
from .algebra import Algebra, AlgebraError, DEFAULT_BUDGET
from .modules import ModuleRep, regular_module, krs_decompose, end_algebra
from .scalars import DEFAULT_DEGREE_CEILING


class CharacteristicError(AlgebraError):
    pass


def check_coprime(field, order):
    if field.p and gcd(field.p, order) != 1:
        raise CharacteristicError(
            f"characteristic {field.p} divides the group order {order}")


def group_algebra(G, field, check=True):
    """``k<G>`` with basis the group elements; generated by the group generators."""
    F = field
    if check:
        check_coprime(F, G.order)
    n = G.order
    c = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            c[i, j, G.mul(i, j)] = F.one
    gens = [F.basis_vector(n, g) for g in G.generator_indices()]
    A = Algebra(F, c, F.basis_vector(n, G.identity), [f"g{i}" for i in range(n)],
                validate=False, generators=gens)
    A.group = G
    return A


def rep_matrix(rho, g):
    """Matrix of group element ``g`` in a representation stored as a module."""
    return rho.action[g]


def representation(kG, matrices):
    """Module over a group algebra from per-element matrices (validated)."""
    return ModuleRep(kG, np.stack(matrices))


def representation_from_generators(kG, gen_mats):
    """Extend generator matrices along the Cayley graph and validate."""
    G = kG.group
    F = kG.field
    mats = [None] * G.order
    n = gen_mats[0].shape[0] if gen_mats else 1
    mats[G.identity] = F.eye(n)
    for k, s, child in G.bfs_edges():
        mats[child] = la.matmul(F, mats[k], F.array(gen_mats[s]))
    return ModuleRep(kG, np.stack(mats))


def trivial_representation(kG):
    F = kG.field
    return ModuleRep(kG, F.array(np.ones((kG.dim, 1, 1), dtype=np.int64)), validate=False)


def is_trivial_rep(rho):
    F = rho.field
    eye = F.eye(rho.dim)
    return all(np.array_equal(rho.action[g], eye) for g in range(rho.algebra.dim))


@dataclass
class Irreducible:
    module: ModuleRep
    dim: int
    endo_dim: int
    multiplicity: int

    def row(self):
        return (self.dim, self.endo_dim, self.multiplicity)


@dataclass
class IrreducibleTable:
    group: object
    field: object
    algebra: Algebra
    entries: list
    status: str

    def rows(self):
        return [e.row() for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def irreducibles(G, field, seed=0, budget=DEFAULT_BUDGET, degree_ceiling=DEFAULT_DEGREE_CEILING):
    """One entry per isomorphism class of irreducible representations."""
    kG = group_algebra(G, field)
    dec = krs_decompose(regular_module(kG), seed, budget, degree_ceiling)
    entries = []
    for piece, mult in zip(dec.classes, dec.multiplicities):
        rho = piece.module
        e = end_algebra(rho).dim
        if rho.dim % e or rho.dim // e != mult:
            raise AssertionError("multiplicity in the regular module differs from dim/endo_dim")
        entries.append(Irreducible(rho, rho.dim, e, mult))
    entries.sort(key=lambda t: (t.dim, 0 if is_trivial_rep(t.module) else 1, t.endo_dim))
    if sum(t.multiplicity * t.dim for t in entries) != G.order:
        raise AssertionError("irreducible multiplicities do not account for the group order")
    if sum(t.dim * t.dim // t.endo_dim for t in entries) != G.order:
        raise AssertionError("sum of dim^2/endo_dim differs from the group order")
    return IrreducibleTable(G, field, kG, entries, dec.status)


def tensor_rep_module(rho, M):
    """``rho (x) M`` for an equivariant module ``M`` over the subgroup acting on ``rho``.

    ``rho`` is a representation of the subgroup ``H`` of ``M``, given as a
    module over ``k<H>`` where ``H`` is presented as its own group whose
    element ``t`` corresponds to ``M.subgroup.members[t]`` (see
    :func:`subgroup_as_group`), or directly over the parent group when
    ``M.subgroup`` is the whole group.
    """
    from .equivariant import EquivariantModule
    F = M.field
    A = M.algebra
    H = M.subgroup
    mapping = getattr(rho.algebra, "subgroup_members", None)
    if mapping is None:
        if rho.algebra.dim != H.parent.order:
            raise AlgebraError("representation is not over the acting group")
        mapping = tuple(range(H.parent.order))
    pos = {g: t for t, g in enumerate(mapping)}
    V = rho.dim
    eye_v = F.eye(V)
    T = np.stack([la.kronecker(F, eye_v, M.underlying.action[i]) for i in range(A.dim)]) \
        if A.dim else F.zeros((0, V * M.dim, V * M.dim))
    under = ModuleRep(A, T, validate=False)
    lin = {}
    for h in H.members:
        if h not in pos:
            raise AlgebraError("representation does not cover the subgroup")
        lin[h] = la.kronecker(F, rho.action[pos[h]], M.lin[h])
    return EquivariantModule(M.action, H, under, lin)


def subgroup_as_group(H):
    """The subgroup ``H`` as a standalone permutation group (same degree).

    Returns ``(K, members)`` where element ``t`` of ``K`` is parent element
    ``members[t]``.
    """
    from .groups import FiniteGroup
    P = H.parent
    gens = [P.elements[g] for g in H.generators]
    K = FiniteGroup(gens, degree=P.degree)
    members = tuple(P.index(K.elements[t]) for t in range(K.order))
    return K, members


def subgroup_irreducibles(H, field, seed=0, budget=DEFAULT_BUDGET,
                          degree_ceiling=DEFAULT_DEGREE_CEILING):
    """Irreducibles of a subgroup, with modules tagged by their parent element indices."""
    K, members = subgroup_as_group(H)
    table = irreducibles(K, field, seed, budget, degree_ceiling)
    table.algebra.subgroup_members = members
    return table
