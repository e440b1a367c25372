"""CNF formulas, the literal-occurrence graph reduction, and bipartite gluing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .graphs import Graph

if TYPE_CHECKING:
    from .gravity import GravityParams


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for i, c in enumerate(clauses):
            if not c:
                raise ValueError(f"clause {i + 1} is empty")
            if len(set(c)) != len(c):
                raise ValueError(f"clause {i + 1} repeats a literal")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {i + 1}: literal {lit} out of range 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)


def satisfies(f: CnfFormula, assignment: Sequence[bool]) -> bool:
    """assignment[i] is the value of variable i + 1."""
    return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in f.clauses)


# vertex -> (clause index, literal)
LiteralMap = tuple[tuple[int, int], ...]


def cnf_to_graph(f: CnfFormula) -> tuple[Graph, LiteralMap]:
    """One vertex per literal occurrence; two occurrences are adjacent unless they share a
    clause or are complementary."""
    lmap: LiteralMap = tuple((ci, lit) for ci, c in enumerate(f.clauses) for lit in c)
    n = len(lmap)
    clause = np.array([c for c, _ in lmap], dtype=np.int64)
    lits = np.array([l for _, l in lmap], dtype=np.int64)
    adj = (clause[:, None] != clause[None, :]) & (lits[:, None] != -lits[None, :])
    return Graph.from_adjacency(adj.astype(np.int64)), lmap


def decode_assignment(clique: Sequence[int], lmap: LiteralMap, f: CnfFormula
                      ) -> Optional[tuple[bool, ...]]:
    """Assignment making every selected literal true (others False), or None if the clique
    does not cover every clause."""
    if len(clique) != len(f.clauses):
        return None
    values = [False] * f.num_vars
    for v in clique:
        lit = lmap[v][1]
        values[abs(lit) - 1] = lit > 0
    assignment = tuple(values)
    if not satisfies(f, assignment):
        raise AssertionError("decoded assignment does not satisfy the formula")
    return assignment


@dataclass
class SatResult:
    status: str  # "sat" | "unknown"
    assignment: Optional[tuple[bool, ...]]
    clique: list[int]


def sat_solve(f: CnfFormula, params: Optional["GravityParams"] = None, rounds: Optional[list] = None) -> SatResult:
    """Gravity clique search on the reduction graph; never claims unsatisfiability."""
    from .gravity import GravityParams, gravity_clique

    g, lmap = cnf_to_graph(f)
    clique = gravity_clique(g, params or GravityParams(), rounds=rounds)
    assignment = decode_assignment(clique, lmap, f)
    if assignment is None:
        return SatResult("unknown", None, clique)
    return SatResult("sat", assignment, clique)


def bipartite_glue(g: Graph, g1: Graph) -> Graph:
    """Disjoint union plus every edge between the two vertex sets; g1's vertices are shifted by g.n."""
    edges = set(g.edges)
    edges.update((u + g.n, v + g.n) for u, v in g1.edges)
    edges.update((u, g.n + v) for u in range(g.n) for v in range(g1.n))
    return Graph(g.n + g1.n, frozenset(edges))


def random_cnf(num_vars: int, num_clauses: int, rng: np.random.Generator, max_len: int = 3,
               max_occurrences: int = 3, min_len: int = 1) -> CnfFormula:
    """Random CNF with clause length in [min_len, max_len] and each variable used at most
    ``max_occurrences`` times.  Stops early when occurrence slots run out."""
    slots = [v for v in range(1, num_vars + 1) for _ in range(max_occurrences)]
    rng.shuffle(slots)
    clauses = []
    while len(clauses) < num_clauses and slots:
        size = int(rng.integers(min_len, max_len + 1))
        clause_vars: list[int] = []
        rest = []
        for v in slots:
            if len(clause_vars) < size and v not in clause_vars:
                clause_vars.append(v)
            else:
                rest.append(v)
        slots = rest
        signs = rng.integers(0, 2, size=len(clause_vars))
        clauses.append(tuple(v if s else -v for v, s in zip(clause_vars, signs)))
    return CnfFormula(num_vars, tuple(clauses))


def balanced_cnf(num_vars: int, clause_len: int, half_occurrences: int, rng: np.random.Generator,
                 max_tries: int = 1000) -> CnfFormula:
    """Every clause has exactly ``clause_len`` literals and every variable occurs exactly
    ``half_occurrences`` times positively and as many times negatively."""
    lits = [s * v for v in range(1, num_vars + 1) for s in (1, -1) for _ in range(half_occurrences)]
    if len(lits) % clause_len:
        raise ValueError("total occurrences must be a multiple of the clause length")
    arr = np.array(lits)
    for _ in range(max_tries):
        rng.shuffle(arr)
        clauses = arr.reshape(-1, clause_len)
        if all(len({abs(int(l)) for l in c}) == clause_len for c in clauses):
            return CnfFormula(num_vars, tuple(tuple(int(l) for l in c) for c in clauses))
    raise RuntimeError("could not place occurrences without repeating a variable in a clause")
