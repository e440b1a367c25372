"""Gravitational contraction heuristic for maximum clique.

Vertex ``j`` starts at the ``j``-th standard basis vector of R^n.  Adjacent
points attract each other (optionally non-adjacent ones repel), and after a
fixed number of explicit Euler steps the closest adjacent pair is taken into
the clique.  The search then recurses on their common neighbourhood.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .graphs import Graph

TIE_RTOL = 1e-9


@dataclass(frozen=True)
class GravityParams:
    g: float = 1.0
    g1: float = 0.0
    s: float = 1.0
    s1: float = 1.0
    eps: float = 0.001
    steps: Optional[int] = 20  # None: 20 * (vertices of the current graph)
    d_min: float = 1e-6

    def __post_init__(self):
        if not (self.g > 0 and self.s > 0 and self.s1 > 0 and self.eps > 0 and self.d_min > 0):
            raise ValueError("g, s, s1, eps and d_min must be positive")
        if self.g1 < 0:
            raise ValueError("g1 must be non-negative")
        if self.steps is not None and self.steps < 1:
            raise ValueError("steps must be >= 1")

    def steps_for(self, n: int) -> int:
        return self.steps if self.steps is not None else 20 * n

    def as_dict(self) -> dict:
        return asdict(self)


def init_positions(n: int) -> np.ndarray:
    """Columns are the points; column j is e_j."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.eye(n)


def _distances(x: np.ndarray, d_min: float) -> np.ndarray:
    pts = x.T
    return np.maximum(cdist(pts, pts), d_min)


def gravity_step(x: np.ndarray, adj: np.ndarray, p: GravityParams) -> np.ndarray:
    """One simultaneous Euler step of the attraction (and optional repulsion) dynamics."""
    adj = np.asarray(adj, dtype=float)
    if x.shape[1] != adj.shape[0]:
        raise ValueError("point count does not match the adjacency matrix")
    d = _distances(x, p.d_min)
    w = p.g * p.eps * adj / d ** p.s
    if p.g1 > 0:
        w -= p.g1 * p.eps * (1.0 - adj) / d ** p.s1
    np.fill_diagonal(w, 0.0)
    # column j gains sum_k w[j, k] * (x_k - x_j)
    return x + x @ w.T - x * w.sum(axis=1)


def closest_adjacent_pair(x: np.ndarray, g: Graph) -> Optional[tuple[int, int]]:
    """Edge of g whose endpoints are nearest; near-ties go to the lexicographically smallest."""
    if not g.edges:
        return None
    edges = np.array(g.sorted_edges())
    diff = x[:, edges[:, 0]] - x[:, edges[:, 1]]
    dist = np.sqrt(np.sum(diff * diff, axis=0))
    best = dist.min()
    i = int(np.nonzero(dist <= best * (1.0 + TIE_RTOL) + 1e-300)[0][0])
    return int(edges[i, 0]), int(edges[i, 1])


def common_neighbors(g: Graph, u: int, v: int) -> set[int]:
    if u == v:
        raise ValueError("u and v must differ")
    nbrs = g.neighbor_sets()
    return nbrs[u] & nbrs[v]


def min_edge_distance(x: np.ndarray, g: Graph) -> Optional[float]:
    if not g.edges:
        return None
    edges = np.array(g.sorted_edges())
    diff = x[:, edges[:, 0]] - x[:, edges[:, 1]]
    return float(np.sqrt(np.min(np.sum(diff * diff, axis=0))))


def integrate(g: Graph, p: GravityParams, trajectory: Optional[list] = None, round_index: int = 0,
              labels: Optional[list[int]] = None) -> np.ndarray:
    """Run the per-round Euler steps from the identity layout."""
    x = init_positions(g.n)
    adj = g.adjacency()
    labels = labels if labels is not None else list(range(g.n))
    for step in range(1, p.steps_for(g.n) + 1):
        x = gravity_step(x, adj, p)
        if trajectory is not None:
            dmin = min_edge_distance(x, g)
            for j in range(g.n):
                coords = x[:3, j].tolist() + [None] * max(0, 3 - g.n)
                trajectory.append([round_index, step, labels[j], *coords, dmin])
    return x


def gravity_clique(g: Graph, p: GravityParams = GravityParams(), rounds: Optional[list] = None,
                   trajectory: Optional[list] = None) -> list[int]:
    """Sorted vertex list of the clique found.

    ``rounds`` (if given) receives one record per contraction round and
    ``trajectory`` one row per (round, step, vertex).
    """
    if g.directed:
        raise ValueError("clique search needs an undirected graph")
    clique: list[int] = []
    current = list(range(g.n))
    r = 0
    while current:
        sub, labels = g.induced(current)
        if sub.n <= 1 or sub.m == 0:
            clique.append(labels[0])
            break
        r += 1
        x = integrate(sub, p, trajectory, r, labels)
        u, v = closest_adjacent_pair(x, sub)
        if rounds is not None:
            rounds.append({
                "round": r,
                "vertices": sub.n,
                "steps": p.steps_for(sub.n),
                "pair": [labels[u], labels[v]],
                "min_edge_distance": min_edge_distance(x, sub),
            })
        clique += [labels[u], labels[v]]
        current = [labels[w] for w in sorted(common_neighbors(sub, u, v))]
    clique.sort()
    if not g.is_clique(clique):
        raise AssertionError(f"gravity search produced a non-clique {clique}")
    return clique
