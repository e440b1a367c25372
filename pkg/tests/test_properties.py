"""Randomised invariants, driven by hypothesis."""

import numpy as np
from hypothesis import given, settings, strategies as st

from isogravity.dimacs import emit_dimacs_graph, parse_dimacs_graph
from isogravity.field import MERSENNE61, FieldMatrix, multispectrum, permute_conjugate, poly_eval
from isogravity.graphs import Graph, Permutation
from isogravity.gravity import gravity_clique
from isogravity.oracle import max_clique_exact
from isogravity.refine import RefineConfig, meta_power, refine_step
from isogravity.sat import CnfFormula, bipartite_glue, cnf_to_graph
from isogravity.spectral import lp_height
from isogravity.splitting import extract_splitting

P = MERSENNE61


@st.composite
def matrix_and_perm(draw, max_n=7, values=P):
    n = draw(st.integers(1, max_n))
    data = draw(st.lists(st.integers(0, values - 1), min_size=n * n, max_size=n * n))
    perm = draw(st.permutations(list(range(n))))
    return FieldMatrix(np.array(data, dtype=np.int64).reshape(n, n)), Permutation(tuple(perm))


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k))


@given(matrix_and_perm())
def test_multispectrum_invariant(mp):
    m, pi = mp
    assert multispectrum(permute_conjugate(m, pi)) == multispectrum(m)


@given(matrix_and_perm(), st.integers(0, 2**32))
def test_poly_eval_commutes(mp, seed):
    m, pi = mp
    coeffs = np.random.default_rng(seed).integers(0, P, size=m.n).tolist()
    assert poly_eval(coeffs, permute_conjugate(m, pi)) == permute_conjugate(poly_eval(coeffs, m), pi)


@given(matrix_and_perm(), st.data())
def test_meta_power_commutes(mp, data):
    m, pi = mp
    exps = data.draw(st.lists(st.integers(0, m.n - 1), min_size=1, max_size=3))
    assert meta_power(permute_conjugate(m, pi), exps) == permute_conjugate(meta_power(m, exps), pi)


@settings(max_examples=40)
@given(matrix_and_perm(values=4), st.integers(0, 2**32),
       st.sampled_from(["polynomial", "metapolynomial"]), st.sampled_from(["symmetric", "standard"]))
def test_refine_step_commutes(mp, seed, mode, product):
    m, pi = mp
    cfg = RefineConfig(mode=mode, product=product)
    out = refine_step(m, permute_conjugate(m, pi), cfg, np.random.default_rng(seed))
    assert out.kind != "diverged"
    assert permute_conjugate(out.matrices[0], pi) == out.matrices[1]


@given(matrix_and_perm(values=5))
def test_splitting_partitions_cells(mp):
    m, pi = mp
    s = extract_splitting(m)
    assert (s.indicators.sum(axis=0) == 1).all() and s.reconstruct() == m
    t = extract_splitting(permute_conjugate(m, pi))
    assert s.alphas == t.alphas and s.support_sizes() == t.support_sizes()


@settings(max_examples=50)
@given(graphs(max_n=12))
def test_gravity_returns_clique_no_larger_than_maximum(g):
    if g.n == 0:
        return
    c = gravity_clique(g)
    assert g.is_clique(c) and len(c) <= len(max_clique_exact(g))


@st.composite
def cnfs(draw):
    nv = draw(st.integers(1, 4))
    lits = st.integers(1, nv).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lits, min_size=1, max_size=3, unique_by=abs), min_size=1, max_size=5))
    return CnfFormula(nv, tuple(tuple(c) for c in clauses))


@given(cnfs())
def test_reduction_cliques_are_consistent(f):
    g, lmap = cnf_to_graph(f)
    c = max_clique_exact(g)
    clause_ids = [lmap[v][0] for v in c]
    assert len(set(clause_ids)) == len(clause_ids)
    lits = {lmap[v][1] for v in c}
    assert not any(-l in lits for l in lits)


@settings(max_examples=40)
@given(graphs(max_n=7), graphs(max_n=7))
def test_gluing_adds_clique_numbers(g, h):
    glued = bipartite_glue(g, h)
    assert len(max_clique_exact(glued)) == len(max_clique_exact(g)) + len(max_clique_exact(h))


@given(graphs())
def test_dimacs_round_trip(g):
    assert parse_dimacs_graph(emit_dimacs_graph(g)) == g


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(2, 4), st.integers(0, 2**32))
def test_heights_at_least_one(rows, cols, seed):
    rows = min(rows, cols)
    b = np.random.default_rng(seed).uniform(0.1, 1.0, size=(rows, cols))
    h = lp_height(b)
    assert np.all(h >= 1 - 1e-9)  # x = 1 is always feasible
