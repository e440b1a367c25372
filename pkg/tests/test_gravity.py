import numpy as np
import pytest

from isogravity.graphs import (Graph, Permutation, complete_graph, cycle_graph, empty_graph,
                               erdos_renyi, path_graph)
from isogravity.gravity import (GravityParams, closest_adjacent_pair, common_neighbors,
                                gravity_clique, gravity_step, init_positions, integrate)
from isogravity.oracle import max_clique_exact


def naive_step(x, adj, p):
    """Per-point loop form of the update, used as a reference."""
    n = x.shape[1]
    out = x.copy()
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            d = max(np.linalg.norm(x[:, k] - x[:, j]), p.d_min)
            if adj[j, k]:
                out[:, j] += p.eps * p.g * (x[:, k] - x[:, j]) / d ** p.s
            elif p.g1:
                out[:, j] -= p.eps * p.g1 * (x[:, k] - x[:, j]) / d ** p.s1
    return out


@pytest.mark.parametrize("g1", [0.0, 0.3])
def test_step_matches_naive_loop(g1):
    rng = np.random.default_rng(0)
    g = erdos_renyi(7, 0.5, rng)
    p = GravityParams(g1=g1, eps=0.05, s=1.5, s1=2.0)
    x = init_positions(7) + rng.normal(scale=0.1, size=(7, 7))
    assert np.allclose(gravity_step(x, g.adjacency(), p), naive_step(x, g.adjacency(), p))


def test_attraction_shrinks_edge_lengths():
    g = path_graph(3)
    x = integrate(g, GravityParams(eps=0.01, steps=10))
    d01 = np.linalg.norm(x[:, 0] - x[:, 1])
    d02 = np.linalg.norm(x[:, 0] - x[:, 2])
    assert d01 < np.sqrt(2) and d02 < np.sqrt(2) and d01 < d02


def test_closest_pair_tie_breaking():
    g = complete_graph(4)
    assert closest_adjacent_pair(init_positions(4), g) == (0, 1)
    assert closest_adjacent_pair(init_positions(3), empty_graph(3)) is None


def test_common_neighbors():
    g = complete_graph(4)
    assert common_neighbors(g, 0, 1) == {2, 3}
    with pytest.raises(ValueError):
        common_neighbors(g, 1, 1)


def test_examples():
    assert gravity_clique(complete_graph(4)) == [0, 1, 2, 3]
    tri_pendant = Graph(4, frozenset({(0, 1), (1, 2), (0, 2), (2, 3)}))
    assert gravity_clique(tri_pendant) == [0, 1, 2]
    assert gravity_clique(empty_graph(3)) == [0]
    assert len(gravity_clique(cycle_graph(5))) == 2


def test_round_records_and_trajectory():
    rounds, traj = [], []
    c = gravity_clique(complete_graph(4), GravityParams(steps=5), rounds=rounds, trajectory=traj)
    assert c == [0, 1, 2, 3]
    assert [r["vertices"] for r in rounds] == [4, 2]
    assert len(traj) == 5 * 4 + 5 * 2
    assert {row[0] for row in traj} == {1, 2}


def test_auto_steps():
    p = GravityParams(steps=None)
    assert p.steps_for(7) == 140


def test_rejects_bad_params_and_digraphs():
    with pytest.raises(ValueError):
        GravityParams(eps=0)
    with pytest.raises(ValueError):
        GravityParams(g1=-1)
    with pytest.raises(ValueError):
        gravity_clique(Graph(2, frozenset({(0, 1)}), directed=True))


def test_never_beats_the_oracle():
    rng = np.random.default_rng(3)
    for _ in range(40):
        g = erdos_renyi(int(rng.integers(2, 14)), float(rng.choice([0.3, 0.5, 0.7])), rng)
        c = gravity_clique(g)
        assert g.is_clique(c) and len(c) <= len(max_clique_exact(g))


def test_relabelling_equivariance():
    rng = np.random.default_rng(4)
    g = erdos_renyi(8, 0.5, rng)
    pi = Permutation.random(8, rng)
    ip = pi.matrix().astype(float)
    p = GravityParams(eps=0.01, steps=15, g1=0.2)
    x, y = integrate(g, p), integrate(g.relabel(pi), p)
    # point pi(j) of the relabelled run is the coordinate-permuted point j
    assert np.allclose(ip @ x @ ip.T, y, atol=1e-9)
    one = gravity_step(init_positions(8), g.adjacency(), p)
    assert np.allclose(ip @ one @ ip.T, gravity_step(init_positions(8), g.relabel(pi).adjacency(), p), atol=1e-9)


def edge_lengths(x, g):
    return sorted(np.linalg.norm(x[:, u] - x[:, v]) for u, v in g.edges)


@pytest.mark.parametrize("g", [cycle_graph(7), complete_graph(5)], ids=["C7", "K5"])
def test_vertex_transitive_symmetry_is_kept(g):
    x = integrate(g, GravityParams(eps=0.01, steps=30))
    lengths = edge_lengths(x, g)
    assert max(lengths) - min(lengths) < 1e-9


def test_diameter_non_increasing_small_eps():
    # Each new point is a convex combination of old ones while eps * sum_k w_jk <= 1,
    # so the diameter cannot grow in that regime.
    rng = np.random.default_rng(5)
    p = GravityParams(eps=0.01)
    checked = 0
    for _ in range(10):
        g = erdos_renyi(int(rng.integers(3, 12)), 0.5, rng)
        adj = g.adjacency()
        x = init_positions(g.n)
        for _ in range(40):
            diff = x[:, :, None] - x[:, None, :]
            dist = np.sqrt((diff ** 2).sum(axis=0))
            w = p.g * adj / np.maximum(dist, p.d_min) ** p.s
            x_next = gravity_step(x, adj, p)
            if p.eps * w.sum(axis=1).max() <= 1:
                diff2 = x_next[:, :, None] - x_next[:, None, :]
                assert np.sqrt((diff2 ** 2).sum(axis=0)).max() <= dist.max() + 1e-12
                checked += 1
            x = x_next
    assert checked > 100
