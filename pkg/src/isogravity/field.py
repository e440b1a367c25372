"""Exact prime-field scalars and square matrices.

Matrices are stored as read-only ``int64`` numpy arrays holding canonical
representatives in ``[0, p)``.  The default modulus is the Mersenne prime
``2**61 - 1``; products for that modulus go through a limb-split kernel so
that every intermediate fits in ``int64``.  Small moduli (used for exhaustive
field tests) take a direct path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MERSENNE61 = (1 << 61) - 1

_LIMB = 21
_LIMB_MASK = (1 << _LIMB) - 1
_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class FieldElement:
    """A scalar of F_p.  Mostly a convenience for tests and scalar code paths."""

    value: int
    p: int = MERSENNE61

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value})"


def _rotate61(x: np.ndarray, shift: int) -> np.ndarray:
    """x * 2**shift mod (2**61 - 1) for 0 <= x < 2**61, without overflow."""
    if shift == 0:
        return x
    low = x & ((1 << (61 - shift)) - 1)
    high = x >> (61 - shift)
    return ((low << shift) + high) % MERSENNE61


def _limbed_mersenne(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    # Three 21-bit limbs; each grouped limb product stays below 2**63 as long as
    # the contraction length is under 2**19.
    al = [a & _LIMB_MASK, (a >> _LIMB) & _LIMB_MASK, a >> (2 * _LIMB)]
    bl = [b & _LIMB_MASK, (b >> _LIMB) & _LIMB_MASK, b >> (2 * _LIMB)]
    acc = None
    for k in range(5):
        part = None
        for i in range(max(0, k - 2), min(2, k) + 1):
            term = op(al[i], bl[k - i])
            part = term if part is None else part + term
        part %= MERSENNE61
        part = _rotate61(part, (_LIMB * k) % 61)
        acc = part if acc is None else (acc + part) % MERSENNE61
    return acc


def _matmul_mersenne(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] >= 1 << 19:
        raise ValueError("dimension too large for the limb kernel")
    return _limbed_mersenne(a, b, np.matmul)


def mul_mod(a: np.ndarray, b, p: int = MERSENNE61) -> np.ndarray:
    """Exact elementwise (broadcasting) product over F_p."""
    b = np.asarray(b, dtype=np.int64)
    if p == MERSENNE61:
        return _limbed_mersenne(a, b, np.multiply)
    if (p - 1) ** 2 <= _INT64_MAX:
        return (a * b) % p
    return ((a.astype(object) * b.astype(object)) % p).astype(np.int64)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int = MERSENNE61) -> np.ndarray:
    """Exact product of two reduced integer matrices over F_p."""
    if p == MERSENNE61:
        return _matmul_mersenne(a, b)
    if a.shape[1] * (p - 1) ** 2 <= _INT64_MAX:
        return (a @ b) % p
    out = (a.astype(object) @ b.astype(object)) % p
    return out.astype(np.int64)


class FieldMatrix:
    """Immutable square matrix over F_p."""

    __slots__ = ("data", "p")

    def __init__(self, data, p: int = MERSENNE61):
        arr = np.array(data, dtype=object) if not isinstance(data, np.ndarray) else data
        if arr.dtype == object:
            arr = np.array([[int(v) % p for v in row] for row in arr], dtype=np.int64).reshape(arr.shape)
        else:
            arr = np.mod(arr.astype(np.int64, copy=True), p)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"FieldMatrix must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        self.data = arr
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int = MERSENNE61) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def ones(cls, n: int, p: int = MERSENNE61) -> "FieldMatrix":
        return cls(np.ones((n, n), dtype=np.int64), p)

    @classmethod
    def zeros(cls, n: int, p: int = MERSENNE61) -> "FieldMatrix":
        return cls(np.zeros((n, n), dtype=np.int64), p)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def _check(self, other: "FieldMatrix"):
        if other.p != self.p or other.n != self.n:
            raise ValueError("incompatible field matrices")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        return FieldMatrix(matmul_mod(self.data, other.data, self.p), self.p)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        return FieldMatrix((self.data + other.data) % self.p, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        return FieldMatrix((self.data - other.data) % self.p, self.p)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix(mul_mod(self.data, int(c) % self.p, self.p), self.p)

    def add_scalar_identity(self, c: int) -> "FieldMatrix":
        out = self.data.copy()
        idx = np.arange(self.n)
        out[idx, idx] = (out[idx, idx] + c % self.p) % self.p
        return FieldMatrix(out, self.p)

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.data.T, self.p)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.data.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __repr__(self):
        return f"FieldMatrix({self.data.tolist()}, p={self.p})"


def random_elements(rng: np.random.Generator, size: int, p: int = MERSENNE61) -> np.ndarray:
    """Uniform draws from F_p."""
    return rng.integers(0, p, size=size, dtype=np.int64)


class MultiSpectrum:
    """Multiset of matrix entry values (diagonal included)."""

    __slots__ = ("values", "counts")

    def __init__(self, values: np.ndarray, counts: np.ndarray):
        self.values = values
        self.counts = counts

    def spectrum(self) -> list[int]:
        """Distinct values in ascending order of representative."""
        return self.values.tolist()

    def __len__(self):
        return len(self.values)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.values.tolist(), self.counts.tolist()))

    def __eq__(self, other):
        if not isinstance(other, MultiSpectrum):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"MultiSpectrum({self.as_dict()})"


def multispectrum(m: FieldMatrix) -> MultiSpectrum:
    values, counts = np.unique(m.data, return_counts=True)
    return MultiSpectrum(values, counts)


def permute_conjugate(m: FieldMatrix, perm: Sequence[int]) -> FieldMatrix:
    """Relabel rows and columns: result[perm[i], perm[j]] = m[i, j]."""
    perm = np.asarray(getattr(perm, "images", perm), dtype=np.int64)
    if perm.shape != (m.n,):
        raise ValueError(f"permutation length {perm.shape[0]} != dimension {m.n}")
    out = np.empty_like(m.data)
    out[np.ix_(perm, perm)] = m.data
    return FieldMatrix(out, m.p)


def poly_eval(coeffs: Iterable[int], m: FieldMatrix) -> FieldMatrix:
    """Horner evaluation of sum(coeffs[k] * m**k); needs len(coeffs) - 1 products."""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != m.n:
        raise ValueError(f"expected {m.n} coefficients (degree n-1), got {len(coeffs)}")
    result = FieldMatrix.identity(m.n, m.p).scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        result = (result @ m).add_scalar_identity(c)
    return result
