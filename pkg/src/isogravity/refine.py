"""Randomised spectrum refinement for graph isomorphism over F_p.

Each step relabels the common entry spectrum of both matrices with fresh
random field elements and pushes both through the same random polynomial
(or meta-polynomial).  The loop stops when the entry multi-spectra differ
(non-isomorphic) or the spectrum size stops growing (stabilised), at which
point the final splittings are extracted and compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Union

import numpy as np

from .field import MERSENNE61, FieldMatrix, multispectrum, poly_eval, random_elements
from .graphs import Graph
from .splitting import (
    PRODUCT_KINDS,
    ProductKind,
    SplittingBasis,
    algebras_match,
    extract_splitting,
    j_closed,
)

Mode = Literal["polynomial", "metapolynomial"]
MODES = ("polynomial", "metapolynomial")


@dataclass(frozen=True)
class RefineConfig:
    mode: Mode = "polynomial"
    max_steps: Optional[int] = None  # None means n**2
    meta_terms: int = 3
    meta_factor_bound: int = 3
    partition: Optional[tuple[tuple[int, ...], ...]] = None
    seed: int = 0
    product: ProductKind = "symmetric"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.product not in PRODUCT_KINDS:
            raise ValueError(f"unknown product kind {self.product!r}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.meta_terms < 1 or self.meta_factor_bound < 1:
            raise ValueError("meta parameters must be >= 1")
        if self.partition is not None:
            if self.mode != "metapolynomial":
                raise ValueError("a vertex partition requires metapolynomial mode")
            object.__setattr__(self, "partition", tuple(tuple(int(v) for v in b) for b in self.partition))

    def steps_for(self, n: int) -> int:
        return self.max_steps if self.max_steps is not None else max(1, n * n)


@dataclass(frozen=True)
class MetaDegree:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) < 1:
            raise ValueError("a meta-degree needs at least one exponent")
        if any(r < 0 for r in self.exponents):
            raise ValueError("meta-degree exponents must be non-negative")


@dataclass
class StepOutcome:
    kind: Literal["diverged", "continued", "stabilized"]
    spectra_size: int
    matrices: Optional[tuple[FieldMatrix, FieldMatrix]] = None


def _relabel(m: FieldMatrix, spectrum: np.ndarray, y: np.ndarray) -> FieldMatrix:
    idx = np.searchsorted(spectrum, m.data)
    return FieldMatrix(y[idx], m.p)


def substitute_spectrum(a: FieldMatrix, b: FieldMatrix, y: Sequence[int]
                        ) -> tuple[FieldMatrix, FieldMatrix]:
    """Replace the j-th smallest entry value by ``y[j]`` in both matrices."""
    ms_a, ms_b = multispectrum(a), multispectrum(b)
    if ms_a != ms_b:
        raise ValueError("entry multi-spectra differ")
    y = np.asarray([int(v) % a.p for v in y], dtype=np.int64)
    if y.shape != (len(ms_a),):
        raise ValueError(f"need {len(ms_a)} substitution values, got {y.shape[0]}")
    return _relabel(a, ms_a.values, y), _relabel(b, ms_a.values, y)


def _power(b: FieldMatrix, r: int) -> FieldMatrix:
    out = FieldMatrix.identity(b.n, b.p)
    base = b
    while r:
        if r & 1:
            out = out @ base
        r >>= 1
        if r:
            base = base @ base
    return out


def meta_power(b: FieldMatrix, degree: MetaDegree | Sequence[int], j: Optional[FieldMatrix] = None
               ) -> FieldMatrix:
    """B^r1 J B^r2 J ... J B^rs, with J all-ones unless a block matrix is given."""
    exps = degree.exponents if isinstance(degree, MetaDegree) else tuple(degree)
    MetaDegree(tuple(exps))
    if any(r > b.n - 1 for r in exps):
        raise ValueError(f"meta-degree exponents must not exceed n-1 = {b.n - 1}")
    j = j if j is not None else FieldMatrix.ones(b.n, b.p)
    out = _power(b, exps[0])
    for r in exps[1:]:
        out = out @ j @ _power(b, r)
    return out


def build_partition_J(partition: Sequence[Sequence[int]], n: Optional[int] = None,
                      p: int = MERSENNE61) -> FieldMatrix:
    """Block-diagonal all-ones matrix (rows/columns in vertex order) for a vertex partition."""
    blocks = [list(b) for b in partition]
    flat = [v for b in blocks for v in b]
    size = n if n is not None else len(flat)
    if any(len(b) == 0 for b in blocks):
        raise ValueError("empty partition block")
    if sorted(flat) != list(range(size)):
        seen = set()
        dup = [v for v in flat if v in seen or seen.add(v)]
        missing = sorted(set(range(size)) - set(flat))
        raise ValueError(f"partition is not a cover of [0, {size}): overlap {dup}, gap {missing}")
    data = np.zeros((size, size), dtype=np.int64)
    for b in blocks:
        data[np.ix_(b, b)] = 1
    return FieldMatrix(data, p)


@dataclass
class _Draw:
    """All random choices of one step, shared by both matrices."""

    y: np.ndarray
    base: np.ndarray
    meta: list[tuple[int, list[np.ndarray]]] = field(default_factory=list)
    y_second: Optional[np.ndarray] = None
    mix: int = 0


def _draw(rng: np.random.Generator, n: int, size: int, cfg: RefineConfig, p: int) -> _Draw:
    d = _Draw(random_elements(rng, size, p), random_elements(rng, n, p))
    if cfg.mode == "metapolynomial":
        for _ in range(cfg.meta_terms):
            s = int(rng.integers(1, cfg.meta_factor_bound + 1))
            coef = int(random_elements(rng, 1, p)[0])
            d.meta.append((coef, [random_elements(rng, n, p) for _ in range(s)]))
    if cfg.product == "standard":
        d.y_second = random_elements(rng, size, p)
        d.mix = int(random_elements(rng, 1, p)[0])
    return d


def _transform(m: FieldMatrix, spectrum: np.ndarray, d: _Draw, j: Optional[FieldMatrix]) -> FieldMatrix:
    y = _relabel(m, spectrum, d.y)
    out = poly_eval(d.base, y)
    for coef, factors in d.meta:
        # A product of random polynomials separated by J is a dense meta-polynomial.
        term = poly_eval(factors[0], y)
        for f in factors[1:]:
            term = term @ j @ poly_eval(f, y)
        out = out + term.scale(coef)
    if d.y_second is not None:
        out = out + (y @ _relabel(m, spectrum, d.y_second)).scale(d.mix)
    return out


def refine_step(a: FieldMatrix, b: FieldMatrix, cfg: RefineConfig, rng: np.random.Generator
                ) -> StepOutcome:
    if a.n != b.n:
        raise ValueError("matrices must have equal dimensions")
    ms_a, ms_b = multispectrum(a), multispectrum(b)
    if ms_a != ms_b:
        return StepOutcome("diverged", len(ms_a))
    n = a.n
    j = None
    if cfg.mode == "metapolynomial":
        j = build_partition_J(cfg.partition, n, a.p) if cfg.partition else FieldMatrix.ones(n, a.p)
    d = _draw(rng, n, len(ms_a), cfg, a.p)
    a2, b2 = _transform(a, ms_a.values, d, j), _transform(b, ms_a.values, d, j)
    out_a, out_b = multispectrum(a2), multispectrum(b2)
    if out_a != out_b:
        return StepOutcome("diverged", len(out_a))
    # A shrinking spectrum can only be a field collision; treat it as stable.
    kind = "continued" if len(out_a) > len(ms_a) else "stabilized"
    return StepOutcome(kind, len(out_a), (a2, b2))


@dataclass
class NonIsomorphic:
    step: int
    trajectory: list[int]
    reason: str
    flagged: bool = False
    bases: Optional[tuple[SplittingBasis, SplittingBasis]] = None
    checks: dict = field(default_factory=dict)
    isomorphic = False


@dataclass
class Isomorphic:
    first: SplittingBasis
    second: SplittingBasis
    steps: int
    trajectory: list[int]
    budget_exhausted: bool = False
    checks: dict = field(default_factory=dict)
    isomorphic = True


Verdict = Union[NonIsomorphic, Isomorphic]


def _verify(s1: SplittingBasis, s2: SplittingBasis, g1: Graph, g2: Graph, cfg: RefineConfig,
            j: Optional[FieldMatrix]) -> tuple[Optional[str], dict]:
    """Final checks on the two splittings; returns (failure reason or None, check record)."""
    checks: dict = {"m": s1.m}
    for kind in PRODUCT_KINDS:
        c1, c2 = s1.constants(kind), s2.constants(kind)
        checks[kind] = {
            "closed": [c1.closed, c2.closed],
            "commutative": [c1.commutative(), c2.commutative()] if kind == "standard" else None,
            "constants_equal": bool(np.array_equal(c1.d, c2.d)),
        }
    undirected = not (g1.directed or g2.directed)
    if cfg.mode == "polynomial" and cfg.product == "symmetric" and undirected:
        checks["indicators_symmetric"] = [s1.indicators_symmetric(), s2.indicators_symmetric()]
    if j is not None:
        checks["j_closed"] = [j_closed(s1, j.data), j_closed(s2, j.data)]

    used = checks[cfg.product]
    if not all(used["closed"]):
        return "closure", checks
    if not algebras_match(s1, s2):
        return "structure-constants", checks
    other = checks["standard" if cfg.product == "symmetric" else "symmetric"]
    if other["closed"][0] != other["closed"][1] or (other["closed"][0] and not other["constants_equal"]):
        return "structure-constants", checks
    for key in ("indicators_symmetric", "j_closed"):
        if key in checks and not all(checks[key]):
            return "closure", checks
    return None, checks


def iso_test(g1: Graph, g2: Graph, cfg: RefineConfig = RefineConfig(), p: int = MERSENNE61) -> Verdict:
    if g1.n != g2.n:
        return NonIsomorphic(0, [], "vertex-count")
    a, b = g1.field_adjacency(p), g2.field_adjacency(p)
    trajectory = [len(multispectrum(a))]
    if multispectrum(a) != multispectrum(b):
        return NonIsomorphic(1, trajectory, "multispectrum")
    n = g1.n
    rng = np.random.default_rng(cfg.seed)
    budget = cfg.steps_for(n)
    stabilized = False
    step = 0
    while step < budget:
        step += 1
        out = refine_step(a, b, cfg, rng)
        if out.kind == "diverged":
            return NonIsomorphic(step, trajectory, "multispectrum")
        a, b = out.matrices
        trajectory.append(out.spectra_size)
        if out.kind == "stabilized":
            stabilized = True
            break

    j = None
    if cfg.mode == "metapolynomial":
        j = build_partition_J(cfg.partition, n, p) if cfg.partition else FieldMatrix.ones(n, p)
    s1, s2 = extract_splitting(a, cfg.product), extract_splitting(b, cfg.product)
    reason, checks = _verify(s1, s2, g1, g2, cfg, j)
    if reason is not None:
        return NonIsomorphic(step, trajectory, reason, flagged=True, bases=(s1, s2), checks=checks)
    return Isomorphic(s1, s2, step, trajectory, budget_exhausted=not stabilized, checks=checks)
