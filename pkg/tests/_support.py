"""Shared builders for the test suite."""
import numpy as np

from skewalg import exactla as la
from skewalg.equivariant import EquivariantModule, canonical_linearisation, induce, restrict
from skewalg.modules import ModuleRep, quiver_representation, regular_module
from skewalg.grouprep import irreducibles, tensor_rep_module
from skewalg.serialize import bundled_names, bundled_path
from skewalg.scalars import QQ, GF

FIELDS = [QQ, GF(5), GF(7), GF(13)]
SETUP_NAMES = [n for n in bundled_names() if not n.startswith("irr_")]
EXCEPTIONAL_NAMES = [n for n in SETUP_NAMES if n != "quaternion_s3"]


def problem(name, field=None):
    """Bundled problem, optionally re-read over another field."""
    import json
    from skewalg.serialize import problem_from_json, field_to_json
    with open(bundled_path(name)) as fh:
        obj = json.load(fh)
    if field is not None:
        obj["field"] = field_to_json(field)
    return problem_from_json(obj)


def perm_matrix(F, p):
    P = F.zeros((len(p), len(p)))
    for i, j in enumerate(p):
        P[i, j] = F.one
    return P


def random_invertible(F, n, rng):
    if F.p == 0:
        # unimodular L U P keeps conjugated rational data integral and small
        L = np.tril(F.random_array(rng, (n, n), bound=1), -1) + F.eye(n)
        U = np.triu(F.random_array(rng, (n, n), bound=1), 1) + F.eye(n)
        return la.mat_chain(F, L, U, perm_matrix(F, rng.permutation(n)))
    while True:
        P = F.random_array(rng, (n, n))
        if la.is_invertible(F, P):
            return P


def conjugate_module(M, P):
    """Same equivariant module in the basis given by the rows of ``P``."""
    F = M.field
    Pi = la.inverse(F, P)
    T = np.stack([la.mat_chain(F, P, X, Pi) for X in M.underlying.action])
    under = ModuleRep(M.algebra, T, validate=False)
    lin = {h: la.mat_chain(F, P, L, Pi) for h, L in M.lin.items()}
    return EquivariantModule(M.action, M.subgroup, under, lin, validate=False)


def random_base_module(A, rng, max_dim=2):
    F = A.field
    if A.path_basis is not None:
        Q = A.path_basis.quiver
        while True:
            dims = {v: int(rng.integers(0, max_dim + 1)) for v in Q.vertices}
            if sum(dims.values()):
                break
        maps = {name: F.random_array(rng, (dims[s], dims[t])) for name, s, t in Q.arrows}
        return quiver_representation(A, dims, maps)
    return regular_module(A)


def random_equivariant(action, rng, irr_cache=None):
    """A random equivariant module over the whole group.

    Built as one of: the algebra itself, an induced module, or an irreducible
    twist of the algebra, then written in a random basis.
    """
    G = action.group
    choice = int(rng.integers(0, 3))
    if choice == 0:
        M = canonical_linearisation(action)
    elif choice == 1 and action.algebra.path_basis is None:
        # keep dimensions small: induce the algebra from a random cyclic subgroup
        H = G.subgroup_generated([int(rng.integers(1, G.order))] if G.order > 1 else [])
        M = induce(H, restrict(canonical_linearisation(action), H))
    elif choice == 1:
        X = random_base_module(action.algebra, rng)
        one = G.trivial_subgroup()
        M = induce(one, EquivariantModule(action, one, X, {G.identity: action.field.eye(X.dim)}))
    else:
        if irr_cache is None:
            irr_cache = {}
        key = id(action)
        if key not in irr_cache:
            irr_cache[key] = irreducibles(G, action.field)
        entries = irr_cache[key].entries
        rho = entries[int(rng.integers(0, len(entries)))].module
        M = tensor_rep_module(rho, canonical_linearisation(action))
    return conjugate_module(M, random_invertible(action.field, M.dim, rng))
