"""Real-valued invariants: LP-height vectors, Jacobi eigendecomposition, rank-one augmentation.

Heights are numpy float arrays; ``inf`` marks a coordinate the LP leaves unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

LP_TOL = 1e-9
EIG_TOL = 1e-8


class RankDeficientError(ValueError):
    pass


class AsymmetricMatrixError(ValueError):
    pass


def row_rank(b: np.ndarray, tol: float = LP_TOL) -> int:
    """Rank by Gaussian elimination with partial pivoting, pivots below tol*scale treated as zero."""
    a = np.array(b, dtype=float, copy=True)
    rows, cols = a.shape
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = rank + int(np.argmax(np.abs(a[rank:, c])))
        if abs(a[piv, c]) <= tol * scale:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        a[rank + 1:] -= np.outer(a[rank + 1:, c] / a[rank, c], a[rank])
        rank += 1
    return rank


@dataclass
class LPResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: float
    x: Optional[np.ndarray]


def _pivot(t: np.ndarray, basis: list[int], r: int, c: int):
    t[r] /= t[r, c]
    for i in range(t.shape[0]):
        if i != r and t[i, c] != 0.0:
            t[i] -= t[i, c] * t[r]
    basis[r] = c


def _bland(t: np.ndarray, basis: list[int], cost: np.ndarray, allowed: int, tol: float) -> str:
    """Maximise cost over the tableau in place; columns >= allowed never enter."""
    for _ in range(50_000):
        reduced = cost[:allowed] - cost[basis] @ t[:, :allowed]
        entering = np.nonzero(reduced > tol)[0]
        if entering.size == 0:
            return "optimal"
        c = int(entering[0])
        rows_ok = np.nonzero(t[:, c] > tol)[0]
        if rows_ok.size == 0:
            return "unbounded"
        ratios = t[rows_ok, -1] / t[rows_ok, c]
        ties = rows_ok[ratios <= ratios.min() + tol]
        leave = min(ties, key=lambda i: basis[i])
        _pivot(t, basis, int(leave), c)
    raise RuntimeError("simplex iteration limit reached")


def simplex_max(c: Sequence[float], a: np.ndarray, b: Sequence[float], tol: float = LP_TOL) -> LPResult:
    """max c.x  s.t.  a x <= b, x >= 0, by the two-phase tableau method with Bland's rule."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    neg = b < 0
    k = int(neg.sum())
    width = n + m + k
    t = np.zeros((m, width + 1))
    t[:, :n] = a
    t[:, n:n + m] = np.eye(m)
    t[:, -1] = b
    t[neg] *= -1.0
    basis = []
    art = n + m
    for i in range(m):
        if neg[i]:
            t[i, art] = 1.0
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)

    if k:
        phase1 = np.zeros(width)
        phase1[n + m:] = -1.0
        _bland(t, basis, phase1, width, tol)
        if -(phase1[basis] @ t[:, -1]) > tol * max(1.0, float(np.abs(b).max())):
            return LPResult("infeasible", math.nan, None)
        keep = []
        for r in range(m):
            if basis[r] >= n + m:
                cand = np.nonzero(np.abs(t[r, :n + m]) > tol)[0]
                if cand.size == 0:
                    continue  # redundant row
                _pivot(t, basis, r, int(cand[0]))
            keep.append(r)
        t = np.hstack([t[keep, :n + m], t[keep, -1:]])
        basis = [basis[r] for r in keep]

    cost = np.zeros(n + m)
    cost[:n] = c
    status = _bland(t, basis, cost, n + m, tol)
    if status == "unbounded":
        return LPResult("unbounded", math.inf, None)
    x = np.zeros(n + m)
    x[basis] = t[:, -1]
    return LPResult("optimal", float(c @ x[:n]), x[:n])


def lp_height(b: np.ndarray, tol: float = LP_TOL) -> np.ndarray:
    """height_j = max x_j over {x >= 0 : B x <= B 1}; ``inf`` when unbounded."""
    b = np.atleast_2d(np.asarray(b, dtype=float))
    rows, cols = b.shape
    if row_rank(b, tol) < rows:
        raise RankDeficientError(f"{rows}x{cols} matrix is not of full row rank")
    rhs = b @ np.ones(cols)
    out = np.empty(cols)
    for j in range(cols):
        obj = np.zeros(cols)
        obj[j] = 1.0
        res = simplex_max(obj, b, rhs, tol)
        if res.status == "infeasible":  # x = 1 is always feasible
            raise RuntimeError("simplex reported an infeasible height LP")
        out[j] = res.value
    return out


@dataclass
class EigenDecomposition:
    """Eigenvalue groups in ascending order; each block holds orthonormal eigenvectors as rows."""

    groups: list[tuple[float, np.ndarray]]
    tol: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([[lam] * blk.shape[0] for lam, blk in self.groups]) if self.groups else np.zeros(0)

    @property
    def vectors(self) -> np.ndarray:
        """All eigenvectors stacked as rows, in group order."""
        return np.vstack([blk for _, blk in self.groups])

    def reconstruct(self) -> np.ndarray:
        n = self.groups[0][1].shape[1] if self.groups else 0
        out = np.zeros((n, n))
        for lam, blk in self.groups:
            out += lam * blk.T @ blk
        return out


def _jacobi(a: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    target = 1e-15 * norm
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(a[offdiag]) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def _orient(vec: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    # Relabelling-invariant sign choice: first odd power sum that is clearly non-zero.
    for k in (1, 3, 5, 7):
        moment = float(np.sum(vec ** k))
        if abs(moment) > tol:
            return vec if moment > 0 else -vec
    nz = np.nonzero(np.abs(vec) > tol)[0]
    return vec if nz.size == 0 or vec[nz[0]] > 0 else -vec


def symmetric_eigendecompose(m: np.ndarray, tol: float = EIG_TOL) -> EigenDecomposition:
    """Cyclic Jacobi; eigenvalues closer than tol*||M|| share a group.

    One-dimensional blocks get a permutation-invariant sign; bases of larger
    eigenspaces are whatever the rotations produce.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    norm = float(np.linalg.norm(m))
    if np.abs(m - m.T).max(initial=0.0) > tol * max(1.0, norm):
        raise AsymmetricMatrixError("matrix is not symmetric within tolerance")
    vals, vecs = _jacobi((m + m.T) / 2.0)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    groups: list[tuple[float, np.ndarray]] = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > tol * max(norm, 1e-300):
            block = vecs[:, start:i].T.copy()
            if block.shape[0] == 1:
                block[0] = _orient(block[0])
            groups.append((float(np.mean(vals[start:i])), block))
            start = i
    return EigenDecomposition(groups, tol)


def eigenheight(m: np.ndarray, which: Iterable[int], tol: float = EIG_TOL,
                decomposition: Optional[EigenDecomposition] = None) -> np.ndarray:
    """LP-height of the stacked eigenvector rows of the selected groups (indices into ``groups``)."""
    dec = decomposition or symmetric_eigendecompose(m, tol)
    idx = sorted(set(which))
    if not idx:
        raise ValueError("select at least one eigenvalue group")
    return lp_height(np.vstack([dec.groups[k][1] for k in idx]))


def rank1_augment(m: np.ndarray, h: np.ndarray, c: float) -> np.ndarray:
    """M + c h h^T."""
    h = np.asarray(h, dtype=float)
    if not np.all(np.isfinite(h)):
        raise ValueError("height vector has unbounded coordinates")
    return np.asarray(m, dtype=float) + c * np.outer(h, h)
