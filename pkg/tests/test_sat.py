import itertools

import numpy as np
import pytest

from isogravity.graphs import Graph, complete_graph, cycle_graph, path_graph, random_regular
from isogravity.oracle import exhaustive_sat, max_clique_exact
from isogravity.sat import (CnfFormula, balanced_cnf, bipartite_glue, cnf_to_graph,
                            decode_assignment, random_cnf, sat_solve, satisfies)


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 1),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))


def test_reduction_graph_structure():
    f = CnfFormula(2, ((1, 2), (-1, 2)))
    g, lmap = cnf_to_graph(f)
    assert lmap == ((0, 1), (0, 2), (1, -1), (1, 2))
    # x1@c1 -- ¬x1@c2 are complementary, x1@c1 -- x2@c1 share a clause
    assert g.edges == {(0, 3), (1, 2), (1, 3)}
    assert len(max_clique_exact(g)) == 2 == len(f.clauses)
    assert exhaustive_sat(f) is not None


def test_decode_examples():
    f = CnfFormula(2, ((1, 2), (-1,)))
    g, lmap = cnf_to_graph(f)
    assert decode_assignment([1, 2], lmap, f) == (False, True)
    assert decode_assignment([1], lmap, f) is None
    f1 = CnfFormula(1, ((1,),))
    assert decode_assignment([0], cnf_to_graph(f1)[1], f1) == (True,)


def test_sat_solve_examples():
    assert sat_solve(CnfFormula(1, ((1,), (-1,)))).status == "unknown"
    res = sat_solve(CnfFormula(2, ((1, 2), (-1,))))
    assert res.status == "sat" and res.assignment == (False, True)


def test_clique_count_criterion():
    rng = np.random.default_rng(0)
    for _ in range(40):
        f = random_cnf(int(rng.integers(1, 6)), int(rng.integers(1, 7)), rng)
        g, _ = cnf_to_graph(f)
        assert (len(max_clique_exact(g)) == len(f.clauses)) == (exhaustive_sat(f) is not None)


def test_no_heuristic_false_sat():
    rng = np.random.default_rng(1)
    for _ in range(40):
        f = random_cnf(int(rng.integers(1, 8)), int(rng.integers(1, 9)), rng)
        res = sat_solve(f)
        if res.status == "sat":
            assert satisfies(f, res.assignment)
            assert exhaustive_sat(f) is not None


def test_gluing():
    assert bipartite_glue(complete_graph(3), complete_graph(2)) == complete_graph(5)
    assert len(max_clique_exact(bipartite_glue(path_graph(3), complete_graph(2)))) == 4
    # C4 side: 2 + 3, K3 side: 2 + 4; n + k1 = 6 differs from n1 + k = 5
    glued = bipartite_glue(cycle_graph(4), complete_graph(3))
    assert glued.n == 7 and sorted(glued.degrees()) == [5, 5, 5, 5, 6, 6, 6]


def test_gluing_regularity_condition():
    rng = np.random.default_rng(2)
    g, g1 = random_regular(6, 2, rng), random_regular(4, 0, rng)
    # n + k1 == n1 + k  gives a regular result
    assert set(bipartite_glue(g, g1).degrees()) == {6}
    g1 = random_regular(6, 3, rng)
    assert len(set(bipartite_glue(g, g1).degrees())) == 2


def test_random_cnf_bounds():
    rng = np.random.default_rng(3)
    for _ in range(30):
        f = random_cnf(10, 12, rng, max_len=3, max_occurrences=3)
        counts = {}
        for c in f.clauses:
            assert 1 <= len(c) <= 3
            for l in c:
                counts[abs(l)] = counts.get(abs(l), 0) + 1
        assert max(counts.values()) <= 3


def test_balanced_cnf_gives_regular_graph():
    rng = np.random.default_rng(4)
    f = balanced_cnf(6, 3, 1, rng)
    g, _ = cnf_to_graph(f)
    # degree of an occurrence: N - clause size - occurrences of its complement
    assert set(g.degrees()) == {12 - 3 - 1}
    with pytest.raises(ValueError):
        balanced_cnf(5, 3, 1, rng)
