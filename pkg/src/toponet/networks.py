"""Weighted networks, hypergraphs and point clouds with metric validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

SYMMETRY_TOL = 1e-12

CONVENTIONS = ("similarity", "dissimilarity")
THRESHOLD_MODES = ("above", "below")


class DataError(ValueError):
    """Input data violates a structural contract (bad file, bad matrix, bad flag)."""


def _square_float(arr, name: str = "weights") -> np.ndarray:
    w = np.asarray(arr, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DataError(f"{name} must be a square matrix, got shape {w.shape}")
    if w.shape[0] < 1:
        raise DataError(f"{name} must have at least one row")
    if not np.all(np.isfinite(w)):
        raise DataError(f"{name} contains non-finite entries")
    return w


@dataclass(frozen=True)
class WeightedNetwork:
    """Undirected weighted network (V, w).

    Weights are symmetric, nonnegative, with zero diagonal; a zero
    off-diagonal entry means "no edge".  The convention flag records whether
    larger weights mean stronger ties (similarity) or larger separation
    (dissimilarity); it controls default threshold direction downstream.
    """

    weights: np.ndarray
    convention: str = "similarity"

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise DataError(f"unknown convention {self.convention!r}")
        w = _square_float(self.weights)
        asym = float(np.max(np.abs(w - w.T))) if w.size else 0.0
        if asym > SYMMETRY_TOL:
            raise DataError(
                f"weights asymmetric beyond tolerance: max |w - w'| = {asym:.3g}"
            )
        if float(np.max(np.abs(np.diag(w)))) > SYMMETRY_TOL:
            raise DataError("diagonal weights must be zero")
        if float(np.min(w)) < 0.0:
            raise DataError("negative edge weight")
        # store an exactly symmetric copy with exact zero diagonal
        upper = np.triu(w, 1)
        object.__setattr__(self, "weights", upper + upper.T)
        self.weights.setflags(write=False)

    @property
    def p(self) -> int:
        return self.weights.shape[0]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (i, j, w) arrays for the q edges with i < j and w > 0."""
        ii, jj = np.nonzero(np.triu(self.weights, 1))
        return ii, jj, self.weights[ii, jj]

    def edge_weights(self) -> np.ndarray:
        return self.edge_arrays()[2]

    def with_convention(self, convention: str) -> "WeightedNetwork":
        return WeightedNetwork(self.weights, convention)


@dataclass(frozen=True)
class BinaryNetwork:
    """0/1 adjacency produced by thresholding a weighted network."""

    adjacency: np.ndarray
    epsilon: float

    def __post_init__(self):
        a = _square_float(self.adjacency, "adjacency")
        if not np.array_equal(a, a.T):
            raise DataError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise DataError("adjacency diagonal must be zero")
        if not np.all((a == 0) | (a == 1)):
            raise DataError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adjacency", a.astype(np.uint8))
        self.adjacency.setflags(write=False)

    @property
    def p(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))


@dataclass(frozen=True)
class Hypergraph:
    """Vertex-by-hyperedge 0/1 incidence matrix."""

    incidence: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.incidence)
        if h.ndim != 2:
            raise DataError(f"incidence must be 2-d, got shape {h.shape}")
        if not np.all((h == 0) | (h == 1)):
            raise DataError("incidence entries must be 0 or 1")
        if h.shape[1] and np.any(h.sum(axis=0) == 0):
            raise DataError("empty hyperedge column")
        object.__setattr__(self, "incidence", h.astype(np.int64))
        self.incidence.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_edges(self) -> int:
        return self.incidence.shape[1]


@dataclass(frozen=True)
class PointCloud:
    """Points in D-dimensional space with a pairwise metric (default Euclidean)."""

    points: np.ndarray
    metric: Optional[Callable[[np.ndarray, np.ndarray], float]] = None

    def __post_init__(self):
        x = np.asarray(self.points, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1:
            raise DataError(f"points must be an n x D array, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("points contain non-finite values")
        object.__setattr__(self, "points", x)
        self.points.setflags(write=False)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def distances(self) -> np.ndarray:
        """Full n x n pairwise distance matrix."""
        x = self.points
        if self.metric is None:
            diff = x[:, None, :] - x[None, :, :]
            d = np.sqrt(np.sum(diff * diff, axis=-1))
        else:
            n = self.n
            d = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    d[i, j] = d[j, i] = float(self.metric(x[i], x[j]))
        if float(np.min(d)) < 0.0:
            raise DataError("metric produced a negative distance")
        np.fill_diagonal(d, 0.0)
        return d

    def distances_to(self, x: np.ndarray) -> np.ndarray:
        """Distances from a query point to every cloud point."""
        q = np.asarray(x, dtype=float).reshape(-1)
        if q.shape[0] != self.points.shape[1]:
            raise DataError(
                f"query has dimension {q.shape[0]}, cloud has {self.points.shape[1]}"
            )
        if self.metric is None:
            diff = self.points - q[None, :]
            return np.sqrt(np.sum(diff * diff, axis=-1))
        return np.array([float(self.metric(q, pt)) for pt in self.points])


class MetricReport(NamedTuple):
    nonnegativity: bool
    identity: bool
    symmetry: bool
    triangle: bool
    violating_triple: Optional[tuple[int, int, int]]

    @property
    def is_metric(self) -> bool:
        return self.nonnegativity and self.identity and self.symmetry and self.triangle


def corr_to_weight(corr) -> WeightedNetwork:
    """Turn a correlation matrix into the dissimilarity network w = sqrt(1 - corr)."""
    c = _square_float(corr, "corr")
    if float(np.max(np.abs(c - c.T))) > SYMMETRY_TOL:
        raise DataError("correlation matrix must be symmetric")
    if float(np.max(np.abs(np.diag(c) - 1.0))) > SYMMETRY_TOL:
        raise DataError("correlation matrix must have unit diagonal")
    if float(np.min(c)) < -1.0 - SYMMETRY_TOL or float(np.max(c)) > 1.0 + SYMMETRY_TOL:
        raise DataError("correlation entries must lie in [-1, 1]")
    w = np.sqrt(np.clip(1.0 - c, 0.0, None))
    np.fill_diagonal(w, 0.0)
    return WeightedNetwork(w, convention="dissimilarity")


def check_metric(net: WeightedNetwork, tol: float = 1e-12) -> MetricReport:
    """Check the four metric axioms; report the first triangle-violating triple."""
    w = net.weights
    p = net.p
    nonneg = bool(np.min(w) >= -tol)
    identity = bool(np.max(np.abs(np.diag(w))) <= tol)
    symmetry = bool(np.max(np.abs(w - w.T)) <= tol)
    triple = None
    for i in range(p):
        # best relay for every target j: min_k w_ik + w_kj
        relay = np.min(w[i][:, None] + w, axis=0)
        bad = np.nonzero(w[i] > relay + tol)[0]
        if bad.size:
            j = int(bad[0])
            k = int(np.argmin(w[i] + w[:, j]))
            triple = (i, j, k)
            break
    return MetricReport(nonneg, identity, symmetry, triple is None, triple)


def threshold(net: WeightedNetwork, eps: float, mode: str = "above") -> BinaryNetwork:
    """Binary network keeping edges with w > eps ("above") or w < eps ("below")."""
    if mode not in THRESHOLD_MODES:
        raise DataError(f"unknown threshold mode {mode!r}")
    w = net.weights
    if mode == "above":
        adj = (w > eps)
    else:
        adj = (w < eps) & (w > 0)
    adj = adj.astype(np.uint8)
    np.fill_diagonal(adj, 0)
    return BinaryNetwork(adj, float(eps))


def hypergraph_adjacency(hg: Hypergraph) -> np.ndarray:
    """Adjacency A = H H' - D, D the diagonal of H H' (vertex degrees).

    Off-diagonal entries count hyperedges shared by the two vertices; the
    diagonal is zero by construction.
    """
    h = hg.incidence
    a = h @ h.T
    np.fill_diagonal(a, 0)
    return a
