"""DIMACS graph (``p edge``) and CNF (``p cnf``) text formats, plus vertex-partition files."""

from __future__ import annotations

from .graphs import Graph
from .sat import CnfFormula


class DimacsError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise DimacsError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_dimacs_graph(text: str) -> Graph:
    """1-based ``e u v`` lines after a ``p edge n m`` header; comments start with ``c``."""
    n = declared = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError("second problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"malformed header {raw.strip()!r}", lineno)
            n, declared = _ints(parts[2:], lineno)
            if n < 0 or declared < 0:
                raise DimacsError("negative counts in header", lineno)
        elif tag == "e":
            if n is None:
                raise DimacsError("edge before problem line", lineno)
            if len(parts) != 3:
                raise DimacsError(f"malformed edge line {raw.strip()!r}", lineno)
            u, v = _ints(parts[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"vertex out of range 1..{n}", lineno)
            if u == v:
                raise DimacsError(f"self-loop at vertex {u}", lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in seen:
                raise DimacsError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            edges.append(key)
        else:
            raise DimacsError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise DimacsError("missing 'p edge' problem line")
    if len(edges) != declared:
        raise DimacsError(f"header declares {declared} edges, found {len(edges)}")
    return Graph(n, frozenset(edges))


def emit_dimacs_graph(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edge {g.n} {g.m}")
    lines += [f"e {u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Standard DIMACS CNF; clauses are zero-terminated and may span lines."""
    nv = nc = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    start_line = None
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "%":
            break
        if parts[0] == "p":
            if nv is not None:
                raise DimacsError("second problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {raw.strip()!r}", lineno)
            nv, nc = _ints(parts[2:], lineno)
            if nv < 0 or nc < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if nv is None:
            raise DimacsError("clause before problem line", lineno)
        for lit in _ints(parts, lineno):
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause", lineno)
                if len(set(current)) != len(current):
                    raise DimacsError("repeated literal in clause", start_line)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > nv:
                raise DimacsError(f"literal {lit} out of range 1..{nv}", lineno)
            if not current:
                start_line = lineno
            current.append(lit)
    if nv is None:
        raise DimacsError("missing 'p cnf' problem line")
    if current:
        raise DimacsError("last clause is not terminated by 0", lineno)
    if len(clauses) != nc:
        raise DimacsError(f"header declares {nc} clauses, found {len(clauses)}")
    return CnfFormula(nv, tuple(clauses))


def emit_dimacs_cnf(f: CnfFormula, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def parse_partition(text: str, n: int) -> tuple[tuple[int, ...], ...]:
    """One block per non-comment line, 1-based vertex numbers separated by whitespace."""
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        vs = _ints(parts, lineno)
        if any(not 1 <= v <= n for v in vs):
            raise DimacsError(f"vertex out of range 1..{n}", lineno)
        blocks.append(tuple(v - 1 for v in vs))
    flat = sorted(v for b in blocks for v in b)
    if flat != list(range(n)):
        raise DimacsError(f"partition blocks must cover vertices 1..{n} exactly once")
    return tuple(blocks)
