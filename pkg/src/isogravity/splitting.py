"""Splittings of a stabilised matrix into 0/1 indicators and their structure constants.

A splitting of ``M`` is ``M = sum_u alpha_u H_u`` over the distinct entries
``alpha_1 < ... < alpha_m``.  Since the supports are disjoint, the whole basis
is carried by a single label matrix ``labels[i, j] = u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .field import MERSENNE61, FieldMatrix

ProductKind = Literal["symmetric", "standard"]
PRODUCT_KINDS = ("symmetric", "standard")


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """``d[v, w, u]``: coefficient of ``H_u`` in the product of ``H_v`` and ``H_w``.

    When ``closed`` is false, ``witness`` holds ``(v, w, i, j)``: the product
    of ``H_v`` and ``H_w`` at cell ``(i, j)`` differs from its value at the
    representative cell of the indicator covering ``(i, j)``.
    """

    d: np.ndarray
    closed: bool
    kind: ProductKind
    witness: Optional[tuple[int, int, int, int]] = None

    def commutative(self) -> bool:
        return bool(np.array_equal(self.d, self.d.transpose(1, 0, 2)))

    def triples(self) -> list[list[int]]:
        v, w, u = np.nonzero(self.d)
        return [[int(a), int(b), int(c), int(self.d[a, b, c])] for a, b, c in zip(v, w, u)]


@dataclass(frozen=True, eq=False)
class SplittingBasis:
    alphas: tuple[int, ...]
    labels: np.ndarray
    product_kind: ProductKind = "symmetric"
    p: int = MERSENNE61
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def indicators(self) -> np.ndarray:
        """Stacked 0/1 matrices, shape ``(m, n, n)``."""
        if "H" not in self._cache:
            self._cache["H"] = (self.labels[None, :, :] == np.arange(self.m)[:, None, None]).astype(np.int64)
        return self._cache["H"]

    def indicator(self, u: int) -> FieldMatrix:
        return FieldMatrix(self.indicators[u], self.p)

    @property
    def representatives(self) -> np.ndarray:
        """First cell (flat row-major index) of each support."""
        if "reps" not in self._cache:
            _, first = np.unique(self.labels.ravel(), return_index=True)
            self._cache["reps"] = first
        return self._cache["reps"]

    def support_sizes(self) -> list[int]:
        return np.bincount(self.labels.ravel(), minlength=self.m).tolist()

    def supports(self) -> list[list[list[int]]]:
        cells = [[] for _ in range(self.m)]
        for i, j in np.ndindex(*self.labels.shape):
            cells[self.labels[i, j]].append([i, j])
        return cells

    def indicators_symmetric(self) -> bool:
        return bool(np.array_equal(self.labels, self.labels.T))

    def reconstruct(self) -> FieldMatrix:
        return random_element(self, self.alphas)

    def constants(self, kind: Optional[ProductKind] = None) -> StructureConstants:
        kind = kind or self.product_kind
        key = ("d", kind)
        if key not in self._cache:
            self._cache[key] = _structure_constants(self, kind)
        return self._cache[key]

    def to_json(self) -> dict:
        sc = self.constants()
        return {
            "product_kind": self.product_kind,
            "alphas": [str(a) for a in self.alphas],
            "supports": self.supports(),
            "closed": sc.closed,
            "d": sc.triples(),
        }


def extract_splitting(m: FieldMatrix, product_kind: ProductKind = "symmetric") -> SplittingBasis:
    if product_kind not in PRODUCT_KINDS:
        raise ValueError(f"unknown product kind {product_kind!r}")
    values, inverse = np.unique(m.data, return_inverse=True)
    labels = inverse.reshape(m.data.shape).astype(np.int64)
    labels.setflags(write=False)
    return SplittingBasis(tuple(values.tolist()), labels, product_kind, m.p)


def _structure_constants(s: SplittingBasis, kind: ProductKind) -> StructureConstants:
    h = s.indicators
    m, n = s.m, s.n
    flat_labels = s.labels.ravel()
    reps = s.representatives
    d = np.zeros((m, m, m), dtype=np.int64)
    witness = None
    for v in range(m):
        prod = h[v] @ h  # H_v H_w for every w
        if kind == "symmetric":
            prod = prod + h @ h[v]
        prod = prod.reshape(m, n * n)
        d[v] = prod[:, reps]
        if witness is None:
            bad = np.nonzero(d[v][:, flat_labels] != prod)
            if bad[0].size:
                w, cell = int(bad[0][0]), int(bad[1][0])
                witness = (v, w, cell // n, cell % n)
    d %= s.p
    return StructureConstants(d, witness is None, kind, witness)


def structure_constants(s: SplittingBasis, kind: Optional[ProductKind] = None) -> StructureConstants:
    """Constants for ``s.product_kind`` (or an explicit ``kind``)."""
    return s.constants(kind)


def span_contains(s: SplittingBasis, x: np.ndarray) -> bool:
    """Whether the integer matrix ``x`` is constant on every support, i.e. lies in the span."""
    flat = np.asarray(x).ravel()
    return bool(np.array_equal(flat[s.representatives][s.labels.ravel()], flat))


def j_closed(s: SplittingBasis, j: np.ndarray) -> bool:
    """Whether ``H_u J`` and ``J H_u`` lie in the span for every ``u``."""
    h = s.indicators
    return all(span_contains(s, hu @ j) and span_contains(s, j @ hu) for hu in h)


def algebras_match(s1: SplittingBasis, s2: SplittingBasis) -> bool:
    """Same coefficients, both closed, same constants and same support sizes."""
    if s1.m != s2.m or s1.alphas != s2.alphas or s1.product_kind != s2.product_kind:
        return False
    c1, c2 = s1.constants(), s2.constants()
    if not (c1.closed and c2.closed):
        return False
    return bool(np.array_equal(c1.d, c2.d)) and s1.support_sizes() == s2.support_sizes()


def _canonical_order(s: SplittingBasis) -> np.ndarray:
    return np.argsort(s.representatives, kind="stable")


def same_algebra(s1: SplittingBasis, s2: SplittingBasis) -> bool:
    """Equality of two splittings of matrices on the same labelled vertex set, up to the
    random coefficient values: identical cell partitions, and identical structure
    constants once both bases are ordered by their first cell.
    """
    if s1.labels.shape != s2.labels.shape or s1.m != s2.m:
        return False
    o1, o2 = _canonical_order(s1), _canonical_order(s2)
    r1, r2 = np.empty(s1.m, dtype=np.int64), np.empty(s2.m, dtype=np.int64)
    r1[o1] = np.arange(s1.m)
    r2[o2] = np.arange(s2.m)
    if not np.array_equal(r1[s1.labels], r2[s2.labels]):
        return False
    c1, c2 = s1.constants(), s2.constants()
    if c1.closed != c2.closed:
        return False
    return bool(np.array_equal(c1.d[np.ix_(o1, o1, o1)], c2.d[np.ix_(o2, o2, o2)]))


def random_element(s: SplittingBasis, x: Sequence[int]) -> FieldMatrix:
    """sum_u x_u H_u."""
    x = np.asarray([int(v) % s.p for v in x], dtype=np.int64)
    if x.shape != (s.m,):
        raise ValueError(f"expected {s.m} coefficients, got {x.shape[0]}")
    return FieldMatrix(x[s.labels], s.p)
