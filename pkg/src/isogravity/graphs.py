"""Simple graphs, vertex permutations and the instance generators used across the package."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .field import MERSENNE61, FieldMatrix


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on [0, {len(images)}): {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(tuple(rng.permutation(n).tolist()))

    def __len__(self):
        return len(self.images)

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __iter__(self):
        return iter(self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        return Permutation(tuple(other.images[j] for j in self.images))

    def matrix(self) -> np.ndarray:
        """I_pi with I_pi[pi(i), i] = 1, so that I_pi X I_pi^T relabels X by pi."""
        n = len(self.images)
        m = np.zeros((n, n), dtype=np.int64)
        m[list(self.images), list(range(n))] = 1
        return m


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0..n-1.

    Undirected edges are stored as ``(u, v)`` with ``u < v``; directed edges
    keep their orientation.
    """

    n: int
    edges: frozenset
    directed: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            norm.add((u, v) if self.directed or u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = False,
                   strict: bool = False) -> "Graph":
        """Build a graph; with ``strict`` a repeated edge raises instead of being merged."""
        edges = list(edges)
        if strict:
            seen = set()
            for u, v in edges:
                key = (u, v) if directed else (min(u, v), max(u, v))
                if key in seen:
                    raise ValueError(f"duplicate edge {(u, v)}")
                seen.add(key)
        return cls(n, frozenset(edges), directed)

    @classmethod
    def from_adjacency(cls, adj, directed: bool = False) -> "Graph":
        adj = np.asarray(adj)
        n = adj.shape[0]
        if directed:
            edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(adj)) if i != j]
        else:
            edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(adj, 1)))]
        return cls(n, frozenset(edges), directed)

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = 1
            if not self.directed:
                a[v, u] = 1
        return a

    def field_adjacency(self, p: int = MERSENNE61) -> FieldMatrix:
        return FieldMatrix(self.adjacency(), p)

    def has_edge(self, u: int, v: int) -> bool:
        if self.directed:
            return (u, v) in self.edges
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        """Out-neighbours for digraphs."""
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v and not self.directed:
                out.add(a)
        return out

    def neighbor_sets(self) -> list[set[int]]:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            if not self.directed:
                nbrs[v].add(u)
        return nbrs

    def degrees(self) -> list[int]:
        return [len(s) for s in self.neighbor_sets()]

    def relabel(self, perm: Permutation | Sequence[int]) -> "Graph":
        """The graph with vertex i renamed to perm[i]."""
        perm = list(perm)
        return Graph(self.n, frozenset((perm[u], perm[v]) for u, v in self.edges), self.directed)

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` (relabelled 0..k-1 in sorted order) plus the index map."""
        keep = sorted(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(keep), frozenset(edges), self.directed), keep

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            return False
        return all(self.has_edge(u, v) and (not self.directed or self.has_edge(v, u))
                   for u, v in combinations(vs, 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)) if n >= 3 else frozenset())


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, frozenset(outer + spokes + inner))


def shrikhande_graph() -> Graph:
    """Cayley graph on Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}."""
    steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = set()
    for a in range(4):
        for b in range(4):
            for da, db in steps:
                u, v = 4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4
                edges.add((min(u, v), max(u, v)))
    return Graph(16, frozenset(edges))


def rook_graph(k: int = 4) -> Graph:
    """k x k rook's graph: cells sharing a row or a column are adjacent."""
    edges = []
    cells = [(r, c) for r in range(k) for c in range(k)]
    for (i, (r1, c1)), (j, (r2, c2)) in combinations(enumerate(cells), 2):
        if r1 == r2 or c1 == c2:
            edges.append((i, j))
    return Graph(k * k, frozenset(edges))


def erdos_renyi(n: int, density: float, rng: np.random.Generator, directed: bool = False) -> Graph:
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < density
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k), directed)


def random_graph_pair(n: int, density: float, seed: int, directed: bool = False
                      ) -> tuple[Graph, Graph, Permutation]:
    """An Erdos-Renyi graph, a random relabelling of it, and the relabelling."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    g = erdos_renyi(n, density, rng, directed)
    perm = Permutation.random(n, rng)
    return g, g.relabel(perm), perm


def random_regular(n: int, k: int, rng: np.random.Generator, max_tries: int = 100) -> Graph:
    """k-regular graph from the pairing (configuration) model, rejecting loops and multi-edges."""
    if (n * k) % 2 or (k > 0 and k >= n):
        raise ValueError(f"no simple {k}-regular graph on {n} vertices")
    if k == 0:
        return empty_graph(n)
    points = np.repeat(np.arange(n), k)
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = points.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(edges) == len(pairs):
            return Graph(n, frozenset(edges))
    raise RuntimeError(f"pairing model failed to produce a simple {k}-regular graph "
                       f"on {n} vertices after {max_tries} tries")
