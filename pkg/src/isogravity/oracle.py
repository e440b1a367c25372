"""Exact brute-force references: isomorphism search, maximum clique, exhaustive SAT.

These exist to check heuristic verdicts on desk-scale instances.  Each
returned witness is re-verified before it is handed back.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import Graph, Permutation
from .sat import CnfFormula, satisfies

ISO_SIZE_HINT = 12
SAT_VAR_LIMIT = 24


@dataclass(frozen=True)
class IsoWitness:
    permutation: Optional[Permutation]

    @property
    def found(self) -> bool:
        return self.permutation is not None


def _invariants(g: Graph) -> list[tuple]:
    adj = g.adjacency()
    out_deg = adj.sum(axis=1)
    in_deg = adj.sum(axis=0)
    # (degree signature, sorted neighbour degree signatures)
    return [
        (int(out_deg[v]), int(in_deg[v]),
         tuple(sorted(int(out_deg[w]) for w in np.nonzero(adj[v])[0])),
         tuple(sorted(int(in_deg[w]) for w in np.nonzero(adj[:, v])[0])))
        for v in range(g.n)
    ]


def brute_force_isomorphism(g1: Graph, g2: Graph) -> IsoWitness:
    """Backtracking search for pi with g1.relabel(pi) == g2.

    Vertices of g1 are mapped in index order and candidates tried in index
    order, so the witness is the lexicographically first one.
    """
    if g1.n != g2.n or g1.m != g2.m or g1.directed != g2.directed:
        return IsoWitness(None)
    n = g1.n
    if n > ISO_SIZE_HINT:
        warnings.warn(f"brute-force isomorphism on n={n} > {ISO_SIZE_HINT} vertices may be slow",
                      stacklevel=2)
    inv1, inv2 = _invariants(g1), _invariants(g2)
    if sorted(inv1) != sorted(inv2):
        return IsoWitness(None)
    a1, a2 = g1.adjacency(), g2.adjacency()
    cands = [[w for w in range(n) if inv2[w] == inv1[v]] for v in range(n)]
    images = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in cands[v]:
            if used[w]:
                continue
            if any(a1[v, u] != a2[w, images[u]] or a1[u, v] != a2[images[u], w] for u in range(v)):
                continue
            images[v] = w
            used[w] = True
            if extend(v + 1):
                return True
            used[w] = False
        images[v] = -1
        return False

    if not extend(0):
        return IsoWitness(None)
    perm = Permutation(tuple(images))
    if g1.relabel(perm) != g2:
        raise AssertionError("isomorphism witness failed verification")
    return IsoWitness(perm)


def max_clique_exact(g: Graph) -> list[int]:
    """A maximum clique by Bron-Kerbosch with pivoting and size bounding.

    Among maximum cliques the lexicographically smallest sorted vertex list wins.
    """
    if g.n == 0:
        return []
    nbrs = g.neighbor_sets()
    best: list[int] = [0]

    def better(c: list[int]) -> bool:
        return len(c) > len(best) or (len(c) == len(best) and c < best)

    def expand(r: list[int], p: set[int], x: set[int]):
        nonlocal best
        if not p and not x:
            cand = sorted(r)
            if better(cand):
                best = cand
            return
        if len(r) + len(p) < len(best):
            return
        pivot = max(p | x, key=lambda u: (len(nbrs[u] & p), -u))
        for v in sorted(p - nbrs[pivot]):
            expand(r + [v], p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    expand([], set(range(g.n)), set())
    if not g.is_clique(best):
        raise AssertionError("maximum clique failed verification")
    return best


def exhaustive_sat(f: CnfFormula, chunk_bits: int = 16) -> Optional[tuple[bool, ...]]:
    """First satisfying assignment in lexicographic order (x1 most significant, False < True)."""
    nv = f.num_vars
    if nv > SAT_VAR_LIMIT:
        raise ValueError(f"exhaustive SAT is limited to {SAT_VAR_LIMIT} variables, got {nv}")
    if not f.clauses:
        return tuple([False] * nv)
    total = 1 << nv
    step = 1 << min(chunk_bits, nv)
    shifts = np.array([nv - 1 - i for i in range(nv)], dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)
        ok = np.ones(idx.size, dtype=bool)
        for clause in f.clauses:
            sat = np.zeros(idx.size, dtype=bool)
            for lit in clause:
                col = bits[:, abs(lit) - 1]
                sat |= col if lit > 0 else ~col
            ok &= sat
            if not ok.any():
                break
        hit = np.nonzero(ok)[0]
        if hit.size:
            assignment = tuple(bool(b) for b in bits[hit[0]])
            if not satisfies(f, assignment):
                raise AssertionError("SAT oracle assignment failed verification")
            return assignment
    return None
