import numpy as np
import pytest

from isogravity.graphs import (Graph, Permutation, complete_graph, cycle_graph, erdos_renyi,
                               petersen_graph, random_graph_pair, random_regular, rook_graph,
                               shrikhande_graph)
from isogravity.oracle import brute_force_isomorphism


def test_permutation_validation_and_algebra():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    rng = np.random.default_rng(0)
    a, b = Permutation.random(6, rng), Permutation.random(6, rng)
    assert a.then(a.inverse()) == Permutation.identity(6)
    assert np.array_equal(a.then(b).matrix(), b.matrix() @ a.matrix())


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(0, 3)}))
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)], strict=True)
    assert Graph(3, frozenset({(2, 0)})).edges == {(0, 2)}


def test_relabel_matches_conjugation():
    rng = np.random.default_rng(1)
    g = erdos_renyi(7, 0.5, rng)
    pi = Permutation.random(7, rng)
    ip = pi.matrix()
    assert np.array_equal(g.relabel(pi).adjacency(), ip @ g.adjacency() @ ip.T)


@pytest.mark.parametrize("g", [shrikhande_graph(), rook_graph(4)], ids=["shrikhande", "rook4"])
def test_srg_16_6_2_2(g):
    a = g.adjacency()
    assert g.n == 16 and g.m == 48 and set(g.degrees()) == {6}
    common = a @ a
    for u in range(16):
        for v in range(u + 1, 16):
            assert common[u, v] == 2  # lambda = mu = 2


def test_small_named_graphs():
    assert petersen_graph().m == 15 and set(petersen_graph().degrees()) == {3}
    assert cycle_graph(5).m == 5
    assert complete_graph(4).is_clique(range(4))


def test_random_graph_pair():
    g1, g2, pi = random_graph_pair(1, 0.5, 7)
    assert g1.n == 1 and pi == Permutation.identity(1)
    g1, g2, pi = random_graph_pair(8, 0.5, 1)
    assert g1.relabel(pi) == g2
    assert brute_force_isomorphism(g1, g2).found
    assert random_graph_pair(8, 0.5, 1) == (g1, g2, pi)


def test_random_regular():
    rng = np.random.default_rng(2)
    for n, k in [(6, 3), (10, 3), (7, 0), (8, 2), (12, 3)]:
        g = random_regular(n, k, rng)
        assert set(g.degrees()) == {k}
    with pytest.raises(ValueError):
        random_regular(5, 3, rng)
    with pytest.raises(ValueError):
        random_regular(4, 4, rng)


def test_induced():
    g = cycle_graph(5)
    sub, keep = g.induced([4, 0, 1])
    assert keep == [0, 1, 4] and sub.m == 2
