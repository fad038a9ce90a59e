import pytest
from hypothesis import given, settings, strategies as st

from skewalg.groups import (FiniteGroup, GroupAction, GroupError, Subgroup, compose, invert,
                            cyclic_group, symmetric_group, named_group, orbits, stabilizer,
                            natural_action)


def test_orders():
    assert FiniteGroup([], degree=1).order == 1
    assert FiniteGroup([(1, 0)]).order == 2
    assert FiniteGroup([(1, 2, 0), (1, 0, 2)]).order == 6
    assert named_group("S4").order == 24


def test_order_bound():
    with pytest.raises(GroupError):
        FiniteGroup([(1, 2, 3, 0), (1, 0, 2, 3)], bound=10)


def test_product_convention():
    G = symmetric_group(3)
    for i in range(G.order):
        for j in range(G.order):
            g, h = G.elements[i], G.elements[j]
            assert G.elements[G.mul(i, j)] == tuple(h[g[x]] for x in range(3))
        assert G.mul(i, G.inv(i)) == G.identity


def test_words_reproduce_elements():
    G = symmetric_group(4)
    gens = G.generator_indices()
    for i in range(G.order):
        k = G.identity
        for s in G.word(i):
            k = G.mul(k, gens[s])
        assert k == i


def test_stabilizer_examples():
    S3 = symmetric_group(3)
    assert stabilizer(S3, natural_action(S3), 0).order == 2
    triv = GroupAction(S3, 2, [(0, 1), (0, 1)])
    assert stabilizer(S3, triv, 1).is_whole()
    C3 = cyclic_group(3)
    assert stabilizer(C3, natural_action(C3), 0).order == 1


def test_orbit_examples():
    C2 = cyclic_group(2)
    assert orbits(C2, natural_action(C2)) == [(0, 1)]
    assert orbits(C2, GroupAction(C2, 3, [(0, 1, 2)])) == [(0,), (1,), (2,)]
    # S_2 swapping coordinates of pairs in {1,2}^2, indexed (1,1),(1,2),(2,1),(2,2)
    S2 = symmetric_group(2)
    assert sorted(orbits(S2, GroupAction(S2, 4, [(0, 2, 1, 3)]))) == [(0,), (1, 2), (3,)]


def test_invalid_action_rejected():
    S3 = symmetric_group(3)
    with pytest.raises(GroupError):
        GroupAction(S3, 2, [(1, 0), (0, 1)])  # a 3-cycle cannot act by a transposition


def _groups():
    return [cyclic_group(4), symmetric_group(3), symmetric_group(4),
            FiniteGroup([(1, 0, 3, 2), (2, 3, 0, 1)])]


@pytest.mark.parametrize("G", _groups(), ids=lambda G: str(G.order))
def test_orbit_stabilizer(G):
    act = natural_action(G)
    for orb in orbits(G, act):
        for x in orb:
            assert len(orb) * stabilizer(G, act, x).order == G.order


@pytest.mark.parametrize("G", _groups(), ids=lambda G: str(G.order))
def test_right_coset_bijection(G):
    for x in range(G.degree):
        H = stabilizer(G, natural_action(G), x)
        prods = {G.mul(h, r) for h in H.members for r in H.coset_reps}
        assert len(prods) == G.order == H.order * H.index
        for g in range(G.order):
            h, r = H.decompose(g)
            assert h in H and r in H.coset_reps and G.mul(h, r) == g


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(5))), st.permutations(list(range(5))))
def test_compose_invert(p, q):
    p, q = tuple(p), tuple(q)
    assert compose(p, invert(p)) == tuple(range(5))
    assert invert(compose(p, q)) == compose(invert(q), invert(p))


def test_subgroup_closure_checked():
    S3 = symmetric_group(3)
    with pytest.raises(GroupError):
        Subgroup(S3, [0, 1])
