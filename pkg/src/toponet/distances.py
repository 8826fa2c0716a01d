"""Topological network distances: single-linkage ultrametrics and
Gromov-Hausdorff, bottleneck and q-Wasserstein matchings, Kolmogorov-Smirnov
on Betti curves."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .diagrams import PersistenceDiagram
from .filtration import BettiCurve, UnionFind, betti_curve
from .networks import DataError, WeightedNetwork


def single_linkage_matrix(net: WeightedNetwork) -> np.ndarray:
    """Single-linkage (minimax path) ultrametric of a dissimilarity network.

    Entry (i, j) is the smallest over paths of the largest edge weight on the
    path, i.e. the dendrogram height at which i and j merge.  Similarity
    networks are first flipped to dissimilarities via (max weight - w).
    Disconnected pairs are reported as +inf.
    """
    ii, jj, ww = net.edge_arrays()
    if net.convention == "similarity" and ww.size:
        ww = float(np.max(ww)) - ww
    order = np.lexsort((jj, ii, ww))
    p = net.p
    s = np.full((p, p), math.inf)
    np.fill_diagonal(s, 0.0)
    uf = UnionFind(p)
    members: dict[int, list[int]] = {v: [v] for v in range(p)}
    for k in order:
        a, b = uf.find(int(ii[k])), uf.find(int(jj[k]))
        if a == b:
            continue
        wa, wb = members[a], members[b]
        h = float(ww[k])
        for u in wa:
            s[u, wb] = h
        for v in wb:
            s[v, wa] = h
        uf.parent[b] = a
        wa.extend(wb)
        del members[b]
    return s


def is_ultrametric(s: np.ndarray, tol: float = 0.0) -> bool:
    """Strong triangle inequality s_ij <= max(s_ik, s_kj) on every triple."""
    p = s.shape[0]
    for k in range(p):
        bound = np.maximum(s[:, k][:, None], s[k, :][None, :])
        if np.any(s > bound + tol):
            return False
    return True


def gh_distance(n1: WeightedNetwork, n2: WeightedNetwork) -> float:
    """Largest entrywise gap between the two single-linkage matrices."""
    if n1.p != n2.p:
        raise DataError(f"node counts differ: {n1.p} vs {n2.p}")
    s1 = single_linkage_matrix(n1)
    s2 = single_linkage_matrix(n2)
    both_inf = np.isinf(s1) & np.isinf(s2)
    diff = np.abs(s1 - s2)
    diff[both_inf] = 0.0
    return float(np.max(diff)) if diff.size else 0.0


def _diag_gap(points: np.ndarray) -> np.ndarray:
    return 0.5 * (points[:, 1] - points[:, 0])


def _check_finite(pd: PersistenceDiagram):
    if len(pd) and not np.all(np.isfinite(pd.points)):
        raise DataError("diagram has infinite deaths; truncate to a death level first")


def _linf_cost(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    if p1.shape[0] == 0 or p2.shape[0] == 0:
        return np.zeros((p1.shape[0], p2.shape[0]))
    return np.max(np.abs(p1[:, None, :] - p2[None, :, :]), axis=2)


def _feasible(cost: np.ndarray, g1: np.ndarray, g2: np.ndarray, r: float) -> bool:
    """Perfect matching with every assignment cost <= r in the augmented graph."""
    m, n = cost.shape
    size = m + n
    rows, cols = [], []
    ci, cj = np.nonzero(cost <= r)
    rows.extend(ci.tolist())
    cols.extend(cj.tolist())
    for i in np.nonzero(g1 <= r)[0]:
        rows.append(int(i))
        cols.append(n + int(i))
    for j in np.nonzero(g2 <= r)[0]:
        rows.append(m + int(j))
        cols.append(int(j))
    for i in range(n):
        for_ = m + i
        rows.extend([for_] * m)
        cols.extend(range(n, n + m))
    data = np.ones(len(rows), dtype=np.int8)
    graph = csr_matrix((data, (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(pd1: PersistenceDiagram, pd2: PersistenceDiagram) -> float:
    """Bottleneck distance with diagonal augmentation, exact.

    The optimum is one of finitely many candidate values (pairwise L_inf costs
    and diagonal gaps), so a binary search with a bipartite feasibility check
    at each candidate returns it exactly.
    """
    _check_finite(pd1)
    _check_finite(pd2)
    p1, p2 = pd1.points, pd2.points
    if p1.shape[0] == 0 and p2.shape[0] == 0:
        return 0.0
    cost = _linf_cost(p1, p2)
    g1 = _diag_gap(p1)
    g2 = _diag_gap(p2)
    candidates = np.unique(np.concatenate([cost.ravel(), g1, g2, [0.0]]))
    lo, hi = 0, candidates.size - 1
    if not _feasible(cost, g1, g2, float(candidates[hi])):
        raise RuntimeError("no feasible matching at the largest candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cost, g1, g2, float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def wasserstein(pd1: PersistenceDiagram, pd2: PersistenceDiagram, q: float = 2.0) -> float:
    """q-Wasserstein matching distance with diagonal augmentation, exact via
    the Hungarian assignment on the augmented square cost matrix."""
    if q < 1:
        raise DataError("q must be at least 1")
    _check_finite(pd1)
    _check_finite(pd2)
    p1, p2 = pd1.points, pd2.points
    m, n = p1.shape[0], p2.shape[0]
    if m == 0 and n == 0:
        return 0.0
    cost = _linf_cost(p1, p2) ** q
    g1 = _diag_gap(p1) ** q
    g2 = _diag_gap(p2) ** q
    big = float(np.sum(cost) + np.sum(g1) + np.sum(g2) + 1.0)
    size = m + n
    c = np.full((size, size), big)
    c[:m, :n] = cost
    c[m:, n:] = 0.0
    for i in range(m):
        c[i, n + i] = g1[i]
    for j in range(n):
        c[m + j, j] = g2[j]
    ri, cj = linear_sum_assignment(c)
    total = float(c[ri, cj].sum())
    return total ** (1.0 / q)


def _curve_gap(c1: BettiCurve, c2: BettiCurve) -> int:
    bp = np.unique(np.concatenate([c1.breakpoints, c2.breakpoints]))
    if bp.size == 0:
        probes = np.asarray([0.0])
    else:
        mids = 0.5 * (bp[:-1] + bp[1:])
        probes = np.concatenate([[min(0.0, bp[0] - 1.0)], bp, mids, [bp[-1] + 1.0]])
    gaps = np.abs(c1.values_at(probes) - c2.values_at(probes))
    return int(np.max(gaps))


def ks_distance(n1: WeightedNetwork, n2: WeightedNetwork, dim: int,
                convention: str = "above") -> float:
    """Sup-norm gap between two Betti curves over the whole filtration.

    Both curves are exact step functions, so probing the union of breakpoints
    plus the gaps between them evaluates the supremum with no grid error.
    """
    if n1.p != n2.p:
        raise DataError(f"node counts differ: {n1.p} vs {n2.p}")
    c1 = betti_curve(n1, dim, convention)
    c2 = betti_curve(n2, dim, convention)
    return float(_curve_gap(c1, c2))
