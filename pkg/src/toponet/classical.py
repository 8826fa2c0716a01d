"""Baseline non-topological network distances: matrix norms, log-Euclidean,
graph matching, canonical correlation."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Union

import numpy as np

from .networks import DataError, WeightedNetwork

RIDGE_SCALE = 1e-6
EXACT_MATCH_MAX_P = 8


@dataclass(frozen=True)
class SpdMatrix:
    """Symmetric matrix expected to be positive definite (possibly after ridge)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DataError(f"matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DataError("matrix has non-finite entries")
        if float(np.max(np.abs(m - m.T))) > 1e-10 * max(1.0, float(np.max(np.abs(m)))):
            raise DataError("matrix must be symmetric")
        m = 0.5 * (m + m.T)
        object.__setattr__(self, "matrix", m)
        self.matrix.setflags(write=False)

    @cached_property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @property
    def is_positive_definite(self) -> bool:
        return self.min_eigenvalue > 0.0


def _as_spd(x: Union[SpdMatrix, np.ndarray]) -> SpdMatrix:
    return x if isinstance(x, SpdMatrix) else SpdMatrix(np.asarray(x, dtype=float))


def matrix_norm_distance(n1: WeightedNetwork, n2: WeightedNetwork,
                         l: float = 2.0) -> float:
    """Entrywise L_l distance of the weight difference over the upper triangle.

    Summing i < j once (rather than the full symmetric matrix) keeps D_1 equal
    to the total absolute edge difference.
    """
    if n1.p != n2.p:
        raise DataError(f"node counts differ: {n1.p} vs {n2.p}")
    if not (l == math.inf or l > 0):
        raise DataError("order l must be positive or inf")
    iu = np.triu_indices(n1.p, 1)
    diff = np.abs(n1.weights[iu] - n2.weights[iu])
    if diff.size == 0:
        return 0.0
    if l == math.inf:
        return float(np.max(diff))
    return float(np.sum(diff ** l) ** (1.0 / l))


def _ridged_log(x: SpdMatrix, alpha: Optional[float]) -> np.ndarray:
    vals = np.linalg.eigvalsh(x.matrix)
    lam_min, lam_max = float(vals[0]), float(vals[-1])
    if lam_min <= 0.0:
        if alpha is None:
            # shift the spectrum so the smallest eigenvalue lands at the
            # usual 1e-6 scale; covers rank-deficient and indefinite inputs
            alpha = RIDGE_SCALE * max(lam_max, 1.0) - lam_min
        if alpha <= 0.0:
            raise DataError("matrix has nonpositive eigenvalues; need ridge alpha > 0")
        m = x.matrix + alpha * np.eye(x.matrix.shape[0])
    else:
        m = x.matrix
    vals, vecs = np.linalg.eigh(m)
    if float(vals[0]) <= 0.0:
        raise DataError(
            f"ridge alpha={alpha:g} still leaves nonpositive eigenvalue {vals[0]:.3g}"
        )
    return (vecs * np.log(vals)) @ vecs.T


def log_euclidean_distance(x, y, alpha: Optional[float] = None) -> float:
    """Frobenius distance of matrix logarithms, log via eigendecomposition.

    Inputs that are not positive definite get a ridge alpha * I first
    (default alpha = 1e-6 times the largest eigenvalue).
    """
    lx = _ridged_log(_as_spd(x), alpha)
    ly = _ridged_log(_as_spd(y), alpha)
    return float(np.linalg.norm(lx - ly, ord="fro"))


def log_euclidean_mean(mats, alpha: Optional[float] = None) -> SpdMatrix:
    """exp of the average log: the geometric mean in the log-Euclidean sense."""
    mats = list(mats)
    if not mats:
        raise DataError("need at least one matrix")
    spds = [_as_spd(m) for m in mats]
    p = spds[0].matrix.shape[0]
    if any(s.matrix.shape[0] != p for s in spds):
        raise DataError("matrices must share a common size")
    acc = np.zeros((p, p))
    for s in spds:
        acc += _ridged_log(s, alpha)
    acc /= len(spds)
    vals, vecs = np.linalg.eigh(0.5 * (acc + acc.T))
    return SpdMatrix((vecs * np.exp(vals)) @ vecs.T)


class GraphMatchResult(NamedTuple):
    bound: float
    exact: Optional[float]


def _permute(a: np.ndarray, perm: tuple[int, ...]) -> np.ndarray:
    idx = np.asarray(perm)
    return a[np.ix_(idx, idx)]


def graph_match_bound(a1, a2, exact: bool = False) -> GraphMatchResult:
    """Spectral lower bound for the graph matching cost, optionally with the
    exact brute-force cost.

    The bound is the squared difference of sorted adjacency spectra; the exact
    cost minimizes the squared Frobenius difference over all node relabelings
    and is only feasible for p <= 8.
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    if a1.shape != a2.shape or a1.ndim != 2 or a1.shape[0] != a1.shape[1]:
        raise DataError("adjacency matrices must be square and equal-sized")
    if not (np.allclose(a1, a1.T) and np.allclose(a2, a2.T)):
        raise DataError("adjacency matrices must be symmetric")
    lam1 = np.sort(np.linalg.eigvalsh(a1))[::-1]
    lam2 = np.sort(np.linalg.eigvalsh(a2))[::-1]
    bound = float(np.sum((lam1 - lam2) ** 2))
    exact_cost = None
    if exact:
        p = a1.shape[0]
        if p > EXACT_MATCH_MAX_P:
            raise DataError(
                f"exact graph matching is brute force and capped at p = {EXACT_MATCH_MAX_P}"
            )
        best = math.inf
        for perm in itertools.permutations(range(p)):
            cost = float(np.sum((_permute(a1, perm) - a2) ** 2))
            if cost < best:
                best = cost
        exact_cost = best
    return GraphMatchResult(bound, exact_cost)


def canonical_correlation(x, y, ridge: float = 0.0) -> float:
    """First canonical correlation between two column blocks.

    Uses QR whitening followed by an SVD of the cross product; the result is
    clipped into [0, 1].  Rank-deficient blocks raise unless a ridge is given.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if y.ndim == 1:
        y = y[:, None]
    n = x.shape[0]
    if y.shape[0] != n:
        raise DataError("x and y need the same number of rows")
    if n <= max(x.shape[1], y.shape[1]):
        raise DataError("need more observations than variables")
    xc = x - x.mean(axis=0)
    yc = y - y.mean(axis=0)
    if np.any(np.ptp(x, axis=0) == 0) or np.any(np.ptp(y, axis=0) == 0):
        raise DataError("constant column present")
    if ridge > 0.0:
        def whiten(z):
            cov = z.T @ z / (n - 1) + ridge * np.eye(z.shape[1])
            vals, vecs = np.linalg.eigh(cov)
            inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.T
            return z @ inv_sqrt / math.sqrt(n - 1)
        qx, qy = whiten(xc), whiten(yc)
    else:
        qx, rx = np.linalg.qr(xc)
        qy, ry = np.linalg.qr(yc)
        tol = n * np.finfo(float).eps
        if np.min(np.abs(np.diag(rx))) <= tol * np.max(np.abs(np.diag(rx))):
            raise DataError("x block is rank deficient; pass ridge > 0")
        if np.min(np.abs(np.diag(ry))) <= tol * np.max(np.abs(np.diag(ry))):
            raise DataError("y block is rank deficient; pass ridge > 0")
    sv = np.linalg.svd(qx.T @ qy, compute_uv=False)
    return float(np.clip(sv[0], 0.0, 1.0))
