import numpy as np
import pytest

from skewalg import exactla as la
from skewalg.algebra import Quiver, path_algebra, product_algebra
from skewalg.equivariant import (ActionError, AlgebraAction, EquivariantModule, skew_algebra,
                                 to_skew_module, from_skew_module, canonical_linearisation,
                                 induce, restrict, equivariant_hom, end_of_induced,
                                 twist_by_group_element, verify_algebra_isomorphism)
from skewalg.grouprep import group_algebra, tensor_rep_module, subgroup_irreducibles
from skewalg.groups import Subgroup, cyclic_group, symmetric_group, trivial_group, stabilizer, \
    natural_action
from skewalg.modules import regular_module, hom_space, iso_test, end_algebra
from skewalg.scalars import QQ

from _support import (EXCEPTIONAL_NAMES, SETUP_NAMES, problem, perm_matrix, random_equivariant,
                      conjugate_module, random_invertible, random_base_module)


def kk_swap(F=QQ):
    A = product_algebra(F, 2)
    return AlgebraAction.from_generators(cyclic_group(2), A, [perm_matrix(F, [1, 0])])


def s3_on_k3(F=QQ):
    G = symmetric_group(3)
    A = product_algebra(F, 3)
    return AlgebraAction.from_generators(G, A, [perm_matrix(F, g) for g in G.generators])


def star_action(F=QQ):
    return problem("star_c2", F).action


def skew_iso(M, N):
    S = skew_algebra(M.action, validate=False)
    return iso_test(to_skew_module(M, S), to_skew_module(N, S)).isomorphic


class TestActions:
    def test_rejects_non_automorphism(self):
        A = path_algebra(Quiver([0, 1], [("a", 0, 1)]), QQ)
        bad = QQ.eye(3)
        bad[2, 2] = QQ(2)
        bad[0, 0] = QQ(0)
        with pytest.raises(ActionError):
            AlgebraAction.from_generators(cyclic_group(2), A, [bad])

    def test_must_permute_trivial_paths(self):
        A = path_algebra(Quiver([0, 1], [("a", 0, 1)]), QQ)
        # swapping the two vertices cannot fix the arrow direction
        act = AlgebraAction.from_generators(cyclic_group(2), A, [QQ.eye(3)])
        assert act.vertex_permutation(act.group.generator_indices()[0]) == (0, 1)
        with pytest.raises(ActionError):
            AlgebraAction.from_generators(cyclic_group(2), A, [perm_matrix(QQ, [1, 0, 2])])

    def test_canonical_linearisation_examples(self):
        T = canonical_linearisation(kk_swap())
        s = T.group.generator_indices()[0]
        assert np.array_equal(T.L(s), perm_matrix(QQ, [1, 0]))
        canonical_linearisation(s3_on_k3()).validate()
        one = trivial_group()
        A = product_algebra(QQ, 2)
        T1 = canonical_linearisation(AlgebraAction.trivial(one, A))
        assert np.array_equal(T1.L(0), QQ.eye(2))


class TestSkewAlgebra:
    def test_trivial_group_gives_the_algebra(self):
        A = path_algebra(Quiver([0, 1, 2], [("a", 0, 1), ("b", 0, 2)]), QQ)
        S = skew_algebra(AlgebraAction.trivial(trivial_group(), A))
        assert np.array_equal(S.structure, A.structure)

    def test_point_gives_the_group_algebra(self):
        G = symmetric_group(3)
        k = path_algebra(Quiver([0]), QQ)
        S = skew_algebra(AlgebraAction.trivial(G, k))
        assert np.array_equal(S.structure, group_algebra(G, QQ).structure)

    def test_defining_rule_on_k_times_k(self):
        S = skew_algebra(kk_swap())
        s = S.group.generator_indices()[0]
        x = S.basis(S.index(s, 0))
        y = S.basis(S.index(s, 1))
        assert np.array_equal(S.multiply(x, y), S.basis(S.index(S.group.identity, 1)))

    @pytest.mark.parametrize("name", SETUP_NAMES)
    def test_bundled_skew_algebras_validate(self, name):
        act = problem(name).action
        S = skew_algebra(act, validate=True)
        assert S.dim == act.group.order * act.algebra.dim
        A = act.algebra
        emb = S.embedding_matrix()
        assert la.rank(S.field, emb) == A.dim
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = S.multiply(S.embed(A.basis(i)), S.embed(A.basis(j)))
                assert np.array_equal(lhs, S.embed(A.multiply(A.basis(i), A.basis(j))))


class TestDictionary:
    def test_trivial_group_leaves_module(self):
        A = product_algebra(QQ, 2)
        act = AlgebraAction.trivial(trivial_group(), A)
        T = canonical_linearisation(act)
        assert np.array_equal(to_skew_module(T).action, T.underlying.action)

    @pytest.mark.parametrize("name", EXCEPTIONAL_NAMES)
    def test_round_trip(self, name):
        rng = np.random.default_rng(0)
        act = problem(name).action
        for _ in range(3):
            M = random_equivariant(act, rng)
            back = from_skew_module(to_skew_module(M))
            assert np.array_equal(back.underlying.action, M.underlying.action)
            assert all(np.array_equal(back.lin[g], M.lin[g]) for g in M.lin)

    def test_regular_skew_module(self):
        act = star_action()
        S = skew_algebra(act)
        M = from_skew_module(regular_module(S))
        assert M.dim == act.group.order * act.algebra.dim
        A = canonical_linearisation(act)
        one = act.group.trivial_subgroup()
        assert skew_iso(M, induce(one, restrict(A, one)))

    @pytest.mark.parametrize("name", SETUP_NAMES)
    def test_hom_dimensions_agree(self, name):
        rng = np.random.default_rng(1)
        act = problem(name).action
        S = skew_algebra(act, validate=False)
        cache = {}
        for _ in range(6):
            M, N = random_equivariant(act, rng, cache), random_equivariant(act, rng, cache)
            assert equivariant_hom(M, N).dim == hom_space(to_skew_module(M, S),
                                                          to_skew_module(N, S)).dim


class TestInduction:
    def test_dimensions_and_identity_case(self):
        act = s3_on_k3()
        G = act.group
        T = canonical_linearisation(act)
        H = stabilizer(G, natural_action(G), 0)
        ind = induce(H, restrict(T, H))
        assert ind.dim == H.index * T.dim
        assert skew_iso(induce(G.whole(), T), T)
        assert restrict(T, G.whole()).lin.keys() == T.lin.keys()
        assert restrict(T, G.trivial_subgroup()).underlying is T.underlying

    def test_representative_independence(self):
        act = s3_on_k3()
        G = act.group
        H = stabilizer(G, natural_action(G), 0)
        alt = Subgroup(G, H.members)
        reps, rep_of = [], {}
        for r in H.coset_reps:
            coset = sorted(G.mul(h, r) for h in H.members)
            reps.append(coset[-1])
            for g in coset:
                rep_of[g] = coset[-1]
        alt.coset_reps, alt._rep_of = tuple(reps), rep_of
        N = restrict(canonical_linearisation(act), H)
        assert skew_iso(induce(H, N), induce(alt, EquivariantModule(act, alt, N.underlying, N.lin)))

    @pytest.mark.parametrize("maker", [s3_on_k3, star_action])
    def test_adjunction_both_sides(self, maker):
        act = maker()
        G = act.group
        rng = np.random.default_rng(2)
        for x in range(len(act.algebra.vertex_idempotents or [0])):
            H = stabilizer(G, act.vertex_action(), x)
            irr = subgroup_irreducibles(H, act.field)
            for _ in range(3):
                M = random_equivariant(act, rng)
                rho = irr.entries[int(rng.integers(0, len(irr.entries)))].module
                N = tensor_rep_module(rho, restrict(canonical_linearisation(act), H))
                N = conjugate_module(N, random_invertible(act.field, N.dim, rng))
                I = induce(H, N)
                R = restrict(M, H)
                assert equivariant_hom(I, M).dim == equivariant_hom(N, R).dim
                assert equivariant_hom(M, I).dim == equivariant_hom(R, N).dim

    @pytest.mark.parametrize("maker", [kk_swap, s3_on_k3, star_action])
    def test_ind_res_is_regular_tensor(self, maker):
        act = maker()
        G = act.group
        T = canonical_linearisation(act)
        one = G.trivial_subgroup()
        reg = regular_module(group_algebra(G, act.field))
        assert skew_iso(induce(one, restrict(T, one)), tensor_rep_module(reg, T))

    def test_twists(self):
        act = star_action()
        G = act.group
        M = random_base_module(act.algebra, np.random.default_rng(4))
        assert np.array_equal(twist_by_group_element(M, G.identity, act).action, M.action)
        s = G.generator_indices()[0]
        twice = twist_by_group_element(twist_by_group_element(M, s, act), s, act)
        assert np.array_equal(twice.action, M.action)
        one = G.trivial_subgroup()
        eq = lambda X: EquivariantModule(act, one, X, {G.identity: QQ.eye(X.dim)})
        assert skew_iso(induce(one, eq(M)), induce(one, eq(twist_by_group_element(M, s, act))))


class TestEndOfInduced:
    @pytest.mark.parametrize("name", SETUP_NAMES)
    def test_isomorphism_and_dimension(self, name):
        act = problem(name).action
        T = canonical_linearisation(act)
        r = end_of_induced(T)
        assert r.end_algebra.dim == act.group.order * end_algebra(T.underlying).dim
        assert verify_algebra_isomorphism(r.skew, r.end_algebra, r.isomorphism)

    def test_k_times_k_example(self):
        r = end_of_induced(canonical_linearisation(kk_swap()))
        assert r.end_algebra.dim == 4

    def test_trivial_group_is_identity(self):
        A = product_algebra(QQ, 2)
        r = end_of_induced(canonical_linearisation(AlgebraAction.trivial(trivial_group(), A)))
        assert np.array_equal(r.isomorphism, QQ.eye(r.skew.dim)) or \
            verify_algebra_isomorphism(r.skew, r.end_algebra, r.isomorphism)

    @pytest.mark.parametrize("maker", [kk_swap, s3_on_k3, star_action])
    def test_invariant_endomorphism_description(self, maker):
        # End_A of the induced regular module is End_k(k<G>) (x) A; its invariants have
        # dimension |G| dim A and form an algebra isomorphic to the skew algebra
        act = maker()
        G, A = act.group, act.algebra
        T = canonical_linearisation(act)
        one = G.trivial_subgroup()
        ind = induce(one, restrict(T, one))
        assert hom_space(ind.underlying, ind.underlying).dim == G.order ** 2 * A.dim
        assert equivariant_hom(ind, ind).dim == G.order * A.dim
        r = end_of_induced(T)
        assert verify_algebra_isomorphism(r.skew, r.end_algebra, r.isomorphism)
