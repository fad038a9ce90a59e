import numpy as np
import pytest

from skewalg.algebra import (Algebra, Quiver, center, matrix_algebra, path_algebra,
                             product_algebra, quotient, radical)
from skewalg.equivariant import ActionError, AlgebraAction, skew_algebra
from skewalg.grouprep import irreducibles
from skewalg.groups import cyclic_group, symmetric_group, trivial_group
from skewalg.scalars import QQ, GF
from skewalg.theorems import (ExceptionalSetup, SetupError, basic_reduction, cartan_matrix,
                              demonet_check, induced_collection, is_basic, quiver_of_basic,
                              validate_setup, verify_main_theorem, wreath_build, vertex_module)

from _support import EXCEPTIONAL_NAMES, FIELDS, problem, perm_matrix

STAR = Quiver([0, 1, 2], [("a", 0, 1), ("b", 0, 2)])


def star_setup(F=QQ, order=None):
    act = problem("star_c2", F).action
    return ExceptionalSetup(act, order)


def split_simple_count(S):
    """Oracle for the vertex count of a split basic algebra: dim Z(S / rad S)."""
    top = quotient(S, radical(S)).algebra
    return center(top).algebra.dim


def permuted_equal(C, D):
    from itertools import permutations
    n = len(C)
    return any(all(C[i][j] == D[p[i]][p[j]] for i in range(n) for j in range(n))
               for p in permutations(range(n)))


class TestValidateSetup:
    def test_star_passes_in_path_order(self):
        rep = validate_setup(star_setup())
        assert rep.ok, rep.failures()
        setup = star_setup()
        assert [b.vertices for b in setup.blocks] == [(1, 2), (0,)]

    def test_reversed_order_reports_semi_orthogonality(self):
        rep = validate_setup(star_setup(order=[(0,), (1, 2)]))
        assert not rep.ok
        assert all("semi-orthogonality" in c.name for c in rep.failures())
        assert any(c.detail.startswith("dim Hom = 1") for c in rep.failures())

    def test_block_order_must_cover_orbits(self):
        with pytest.raises(SetupError):
            star_setup(order=[(0,), (1,), (2,)])

    def test_action_not_permuting_trivial_paths_rejected(self):
        A = path_algebra(Quiver([0, 1], [("a", 0, 1)]), QQ)
        # e0 -> e0 + a, e1 -> e1 - a, a -> -a is an involutive automorphism
        R = QQ.array([[1, 0, 1], [0, 1, -1], [0, 0, -1]])
        with pytest.raises(ActionError):
            AlgebraAction.from_generators(cyclic_group(2), A, [R])
        act = AlgebraAction.from_generators(cyclic_group(2), A, [R], validate=False)
        with pytest.raises(ActionError):
            ExceptionalSetup(act)

    def test_char_dividing_group_order_rejected(self):
        A = product_algebra(GF(2), 2)
        act = AlgebraAction.from_generators(cyclic_group(2), A, [perm_matrix(GF(2), [1, 0])])
        with pytest.raises(Exception, match="characteristic"):
            ExceptionalSetup(act)

    @pytest.mark.parametrize("name", EXCEPTIONAL_NAMES)
    def test_bundled_setups_pass(self, name):
        assert validate_setup(problem(name).setup).ok

    def test_quaternion_projective_is_not_exceptional(self):
        rep = validate_setup(problem("quaternion_s3").setup)
        assert not rep.ok
        assert [c.name for c in rep.failures()] == ["End(P(0)) is the ground field"]


class TestBasicReduction:
    def test_path_algebra_is_already_basic(self):
        A = path_algebra(STAR, QQ)
        red = basic_reduction(A)
        assert red.basic.dim == A.dim
        assert red.multiplicities == [1, 1, 1]
        direct = cartan_matrix([vertex_module(A, i).module for i in range(3)])
        assert permuted_equal(red.cartan, direct)

    def test_swap_on_k_times_k_gives_k(self):
        red = basic_reduction(skew_algebra(problem("kk_c2").action))
        assert red.algebra.dim == 4
        assert red.basic.dim == 1
        assert red.class_dims == [2] and red.multiplicities == [2]

    def test_matrix_algebra_gives_k(self):
        red = basic_reduction(matrix_algebra(QQ, 2))
        assert red.basic.dim == 1 and red.multiplicities == [2]

    @pytest.mark.parametrize("name", ["star_c2", "double_arrow_c2", "s3_point", "kk_c2"])
    def test_idempotent(self, name):
        red = basic_reduction(skew_algebra(problem(name).action))
        again = basic_reduction(red.basic)
        assert again.basic.dim == red.basic.dim
        assert again.multiplicities == [1] * len(red.class_dims)
        assert is_basic(red.basic)
        assert permuted_equal(again.cartan, red.cartan)

    @pytest.mark.parametrize("name", ["star_c2", "double_arrow_c2", "wreath_kk_n2", "s3_point"])
    def test_regular_dimension_bookkeeping(self, name):
        red = basic_reduction(skew_algebra(problem(name).action))
        assert sum(m * d for m, d in zip(red.multiplicities, red.class_dims)) == red.algebra.dim
        assert sum(map(sum, red.cartan)) == red.basic.dim


class TestQuiverOfBasic:
    def test_path_algebra_recovers_quiver(self):
        Q = Quiver([0, 1, 2, 3], [("a", 0, 1), ("b", 0, 2), ("c", 1, 3), ("d", 2, 3),
                                  ("e", 0, 3)])
        q = quiver_of_basic(path_algebra(Q, QQ))
        labels = list(q.vertices)
        got = {(labels[u], labels[v]): d for (u, v), d in q.arrows.items()}
        assert got == {(0, 1): 1, (0, 2): 1, (1, 3): 1, (2, 3): 1, (0, 3): 1}
        assert q.division_dims == [1, 1, 1, 1]

    def test_k_times_k(self):
        q = quiver_of_basic(product_algebra(QQ, 2))
        assert len(q.vertices) == 2 and q.arrow_count == 0

    def test_rejects_non_basic(self):
        with pytest.raises(SetupError):
            quiver_of_basic(matrix_algebra(QQ, 2))

    def test_without_vertex_idempotents(self):
        A = path_algebra(Quiver([0, 1], [("a", 0, 1), ("b", 0, 1)]), QQ)
        bare = Algebra(QQ, A.structure, A.unit, validate=False)
        q = quiver_of_basic(bare)
        assert len(q.vertices) == 2 and q.arrow_count == 2

    @pytest.mark.parametrize("name,vertices,arrows", [("star_c2", 3, 2), ("double_arrow_c2", 4, 4),
                                                      ("wreath_kk_n2", 5, 0), ("s3_point", 3, 0)])
    def test_skew_examples(self, name, vertices, arrows):
        S = skew_algebra(problem(name).action)
        red = basic_reduction(S)
        q = quiver_of_basic(red.basic)
        assert len(q.vertices) == vertices == split_simple_count(S)
        assert q.arrow_count == arrows

    def test_star_arrows_end_at_one_vertex(self):
        red = basic_reduction(skew_algebra(problem("star_c2").action))
        q = quiver_of_basic(red.basic)
        targets = {v for (_, v) in q.arrows}
        sources = {u for (u, _) in q.arrows}
        assert len(targets) == 1 and len(sources) == 2 and not targets & sources


class TestInducedCollection:
    def test_star_objects(self):
        coll = induced_collection(star_setup())
        assert coll.ok
        dims = sorted(o.module.dim for o in coll.objects)
        assert dims == [2, 3, 3]
        assert coll.end_F.dim == 5
        ns = {o.module.dim: o.multiplicity for o in coll.objects}
        assert ns == {2: 2, 3: 1}
        assert sum(o.multiplicity * o.module.dim for o in coll.objects) == 10

    def test_trivial_group_gives_projectives(self):
        A = path_algebra(STAR, QQ)
        setup = ExceptionalSetup(AlgebraAction.trivial(trivial_group(), A))
        coll = induced_collection(setup)
        assert coll.ok
        labels = [lab for lab, _ in A.vertex_idempotents]
        for o in coll.objects:
            P = vertex_module(A, labels.index(o.vertex)).module
            assert o.module.dim == P.dim and o.multiplicity == 1
        assert coll.end_F.dim == A.dim
        rep = verify_main_theorem(setup)
        assert rep.verified and rep.basic_dim == A.dim

    @pytest.mark.parametrize("G", [cyclic_group(2), cyclic_group(3), symmetric_group(3)],
                             ids=["C2", "C3", "S3"])
    def test_one_vertex_any_group(self, G):
        A = path_algebra(Quiver([0]), QQ)
        coll = induced_collection(ExceptionalSetup(AlgebraAction.trivial(G, A)))
        table = irreducibles(G, QQ)
        assert len(coll.objects) == len(table.entries)
        assert sorted(o.multiplicity for o in coll.objects) == \
            sorted(e.dim // e.endo_dim for e in table.entries)
        assert demonet_check(ExceptionalSetup(AlgebraAction.trivial(G, A))).vertex_count == \
            len(table.entries)

    @pytest.mark.parametrize("name", EXCEPTIONAL_NAMES)
    def test_dimension_bookkeeping(self, name):
        setup = problem(name).setup
        coll = induced_collection(setup)
        A, G = setup.algebra, setup.group
        assert sum(o.multiplicity * o.module.dim for o in coll.objects) == G.order * A.dim
        for o in coll.objects:
            b = setup.blocks[o.block]
            assert o.multiplicity * o.rho_endo_dim == b.stabilizer.index * o.rho_dim
            assert o.end_dim == o.rho_endo_dim


class TestMainTheorem:
    @pytest.mark.parametrize("name", EXCEPTIONAL_NAMES)
    def test_verified(self, name):
        rep = verify_main_theorem(problem(name).setup)
        assert rep.verified, [c for c in rep.checks if not c.passed]
        assert rep.end_F_dim == rep.basic_dim
        assert rep.multiplicities == rep.krs_multiplicities
        assert rep.isomorphism is not None

    def test_star_numbers(self):
        rep = verify_main_theorem(star_setup())
        assert (rep.skew_dim, rep.basic_dim) == (10, 5)
        by_dim = {o.module.dim: o.multiplicity for o in rep.collection.objects}
        assert by_dim == {3: 1, 2: 2}

    def test_double_arrow(self):
        setup = problem("double_arrow_c2").setup
        rep = verify_main_theorem(setup)
        assert rep.verified and rep.skew_dim == 8
        assert len(rep.collection.objects) == 4
        assert rep.multiplicities == [1, 1, 1, 1]
        dem = demonet_check(setup)
        assert dem.vertex_count == 4 and dem.per_orbit == [2, 2] and dem.ok

    def test_quaternion_is_a_counterexample(self):
        rep = verify_main_theorem(problem("quaternion_s3").setup)
        assert not rep.verified
        bad = [c for c in rep.checks if not c.passed]
        assert bad and "is a division algebra" in bad[0].detail and "no" in bad[0].detail

    def test_end_F_cartan_entries_are_hom_dims(self):
        rep = verify_main_theorem(star_setup())
        mods = [o.module for o in rep.collection.objects]
        assert rep.cartan_F == cartan_matrix(mods)
        perm = rep.cartan_permutation
        n = len(mods)
        assert all(rep.cartan_F[i][j] == rep.cartan_basic[perm[i]][perm[j]]
                   for i in range(n) for j in range(n))

    def test_star_over_finite_field_matches_rationals(self):
        q = verify_main_theorem(star_setup(QQ))
        p = verify_main_theorem(star_setup(GF(7)))
        assert p.verified and (p.skew_dim, p.basic_dim) == (q.skew_dim, q.basic_dim)


class TestDemonet:
    def test_star(self):
        dem = demonet_check(star_setup())
        assert dem.ok and dem.vertex_count == 3 and sorted(dem.per_orbit) == [1, 2]

    def test_s3_on_a_point(self):
        dem = demonet_check(problem("s3_point").setup)
        assert dem.ok and dem.vertex_count == 3 and dem.arrows == 0


class TestWreath:
    def test_k_times_k_squared(self):
        A = product_algebra(QQ, 2)
        setup = wreath_build(A, 2)
        assert skew_algebra(setup.action).dim == 8
        labels = [[setup.vertex_label(v) for v in b.vertices] for b in setup.blocks]
        assert labels == [[(0, 0)], [(0, 1), (1, 0)], [(1, 1)]]
        rep = verify_main_theorem(setup)
        assert rep.verified
        assert len(quiver_of_basic(basic_reduction(skew_algebra(setup.action)).basic).vertices) \
            == 5

    def test_n_equal_one_is_the_algebra(self):
        A = path_algebra(STAR, QQ)
        setup = wreath_build(A, 1)
        assert setup.group.order == 1
        assert setup.algebra.dim == A.dim
        assert np.array_equal(setup.algebra.structure, A.structure)
        assert len(setup.blocks) == 3

    @pytest.mark.parametrize("n", [2, 3])
    def test_point_gives_symmetric_group_algebra(self, n):
        k = path_algebra(Quiver([0]), QQ)
        setup = wreath_build(k, n)
        S = skew_algebra(setup.action)
        assert S.dim == setup.group.order
        q = quiver_of_basic(basic_reduction(S).basic)
        assert len(q.vertices) == len(irreducibles(symmetric_group(n), QQ).entries)
        assert q.arrow_count == 0

    def test_size_budget(self):
        A = path_algebra(STAR, QQ)
        with pytest.raises(SetupError, match="size budget"):
            wreath_build(A, 4)
        with pytest.raises(SetupError, match="size budget"):
            wreath_build(A, 2, size_budget=49)
        assert wreath_build(A, 2, size_budget=50).group.order == 2

    def test_lexicographic_blocks_follow_base_order(self):
        A = path_algebra(Quiver([0, 1], [("a", 0, 1)]), QQ)
        setup = wreath_build(A, 2)
        firsts = [min(setup.vertex_label(v) for v in b.vertices) for b in setup.blocks]
        assert firsts == sorted(firsts)


@pytest.mark.parametrize("F", FIELDS[1:], ids=str)
def test_kk_swap_basic_over_finite_fields(F):
    red = basic_reduction(skew_algebra(problem("kk_c2", F).action))
    assert red.basic.dim == 1
    assert red.class_dims == [2] and red.multiplicities == [2]
