"""Simplicial complexes: boundary operators, Betti numbers by rank and by Hodge
Laplacian, Rips and witness constructions, distance-to-measure, and persistence
by boundary-matrix reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .diagrams import PersistenceDiagram
from .networks import DataError, PointCloud, WeightedNetwork

RIPS_MAX_POINTS = 512
RIPS_MAX_DIM = 3
HODGE_KERNEL_TOL = 1e-9


def _permutation_sign(perm: Sequence[int]) -> int:
    """Sign of the permutation mapping positions to sorted order."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _relative_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign relating two orderings of the same vertex set."""
    pos = {v: k for k, v in enumerate(b)}
    return _permutation_sign([pos[v] for v in a])


class SimplicialComplex:
    """Finite simplicial complex; simplices keep their given vertex order.

    The stored order fixes each simplex's orientation, so boundary matrices can
    reproduce sign conventions of hand-written examples.  Faces missing from
    the input are added in ascending vertex order.
    """

    def __init__(self, simplices: Iterable[Sequence[int]]):
        by_set: dict[frozenset, tuple[int, ...]] = {}
        given: list[tuple[int, ...]] = []
        for s in simplices:
            tup = tuple(int(v) for v in s)
            if len(set(tup)) != len(tup):
                raise DataError(f"repeated vertex in simplex {tup}")
            key = frozenset(tup)
            if key in by_set:
                if by_set[key] != tup:
                    raise DataError(f"duplicate simplex with conflicting order: {tup}")
                continue
            by_set[key] = tup
            given.append(tup)
        # close under faces; added faces get ascending vertex order
        added: list[tuple[int, ...]] = []
        queue = list(given)
        while queue:
            tup = queue.pop()
            if len(tup) == 1:
                continue
            for drop in range(len(tup)):
                face = tup[:drop] + tup[drop + 1:]
                key = frozenset(face)
                if key not in by_set:
                    canon = tuple(sorted(face))
                    by_set[key] = canon
                    added.append(canon)
                    queue.append(canon)
        # per dimension: caller's simplices first in input order, then the
        # closure faces in ascending order (keeps hand-written layouts intact)
        added.sort(key=lambda t: (len(t), t))
        self._by_dim: list[list[tuple[int, ...]]] = []
        for tup in given + added:
            k = len(tup) - 1
            while len(self._by_dim) <= k:
                self._by_dim.append([])
            self._by_dim[k].append(tup)
        self._index = {
            frozenset(t): (k, i)
            for k, group in enumerate(self._by_dim)
            for i, t in enumerate(group)
        }

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def n_simplices(self, k: int) -> int:
        return len(self._by_dim[k]) if 0 <= k <= self.dim else 0

    def simplices(self, k: int) -> list[tuple[int, ...]]:
        return list(self._by_dim[k]) if 0 <= k <= self.dim else []

    def all_simplices(self) -> list[tuple[int, ...]]:
        return [t for group in self._by_dim for t in group]

    def __contains__(self, simplex) -> bool:
        return frozenset(int(v) for v in simplex) in self._index

    def index_of(self, simplex) -> int:
        key = frozenset(int(v) for v in simplex)
        if key not in self._index:
            raise KeyError(f"simplex {tuple(simplex)} not in complex")
        return self._index[key][1]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.n_simplices(k) for k in range(self.dim + 1))


@dataclass(frozen=True)
class BoundaryOperator:
    """Signed incidence matrix of one dimension; entries in {-1, 0, 1}."""

    k: int
    matrix: np.ndarray


def boundary_matrix(complex_: SimplicialComplex, k: int) -> BoundaryOperator:
    """Boundary operator from k-simplices to (k-1)-simplices.

    Column j lists, with orientation signs, the facets of the j-th k-simplex;
    the 0-boundary is a single zero row.
    """
    if k < 0:
        raise DataError("dimension k must be nonnegative")
    if k > complex_.dim:
        raise DataError(f"complex has dimension {complex_.dim}, asked for k={k}")
    cols = complex_.simplices(k)
    if k == 0:
        return BoundaryOperator(0, np.zeros((1, len(cols)), dtype=np.int64))
    rows = complex_.simplices(k - 1)
    row_pos = {frozenset(t): i for i, t in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, tup in enumerate(cols):
        for drop in range(len(tup)):
            face = tup[:drop] + tup[drop + 1:]
            i = row_pos[frozenset(face)]
            sign = (-1) ** drop * _relative_sign(face, rows[i])
            mat[i, j] += sign
    return BoundaryOperator(k, mat)


def _gf2_rank(mat: np.ndarray) -> int:
    rows = []
    for r in (np.asarray(mat) % 2).astype(np.int64):
        bits = 0
        for j in np.nonzero(r)[0]:
            bits |= 1 << int(j)
        if bits:
            rows.append(bits)
    rank = 0
    pivots: list[int] = []
    for bits in rows:
        for piv in pivots:
            low = piv & -piv
            if bits & low:
                bits ^= piv
        if bits:
            pivots.append(bits)
            rank += 1
    return rank


def betti_via_rank(complex_: SimplicialComplex, k: int) -> int:
    """Betti number from boundary ranks over GF(2):
    beta_k = (n_k - rank d_k) - rank d_{k+1}."""
    if k < 0:
        raise DataError("dimension k must be nonnegative")
    if k > complex_.dim:
        return 0
    n_k = complex_.n_simplices(k)
    rank_k = _gf2_rank(boundary_matrix(complex_, k).matrix) if k > 0 else 0
    if k + 1 <= complex_.dim:
        rank_k1 = _gf2_rank(boundary_matrix(complex_, k + 1).matrix)
    else:
        rank_k1 = 0
    return (n_k - rank_k) - rank_k1


def hodge_laplacian(complex_: SimplicialComplex, k: int) -> np.ndarray:
    """Hodge Laplacian on k-simplices, assembled from signed boundary matrices.

    The up part is d_{k+1} d_{k+1}'; the down part d_k' d_k (shapes force the
    transpose on the left).  For k = 0 the down part vanishes and the result is
    the ordinary graph Laplacian.
    """
    if k < 0:
        raise DataError("dimension k must be nonnegative")
    if k > complex_.dim:
        raise DataError(f"complex has dimension {complex_.dim}, asked for k={k}")
    d_k = boundary_matrix(complex_, k).matrix.astype(float)
    lap = d_k.T @ d_k
    if k + 1 <= complex_.dim:
        d_up = boundary_matrix(complex_, k + 1).matrix.astype(float)
        lap = lap + d_up @ d_up.T
    return lap


def betti_via_hodge(complex_: SimplicialComplex, k: int) -> int:
    """Betti number as the kernel dimension of the Hodge Laplacian."""
    if k > complex_.dim:
        return 0
    lap = hodge_laplacian(complex_, k)
    if lap.size == 0:
        return 0
    vals = np.linalg.eigvalsh(lap)
    lam_max = float(vals[-1])
    if lam_max <= 0.0:
        return lap.shape[0]
    return int(np.count_nonzero(vals <= HODGE_KERNEL_TOL * lam_max))


def _distance_matrix(x: Union[PointCloud, WeightedNetwork, np.ndarray]) -> np.ndarray:
    if isinstance(x, PointCloud):
        return x.distances()
    if isinstance(x, WeightedNetwork):
        return x.weights
    d = np.asarray(x, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DataError("need a point cloud, network, or square distance matrix")
    return d


def _cliques_upto(neighbors: list[np.ndarray], max_size: int) -> list[list[tuple[int, ...]]]:
    """All cliques of 2..max_size vertices; neighbors[v] must be sorted, > v."""
    n = len(neighbors)
    levels: list[list[tuple[int, ...]]] = [[] for _ in range(max_size - 1)]

    def extend(clique: tuple[int, ...], cands: np.ndarray):
        size = len(clique)
        for idx in range(cands.size):
            v = int(cands[idx])
            new = clique + (v,)
            levels[size - 1].append(new)
            if size + 1 < max_size:
                rest = cands[idx + 1:]
                nxt = rest[np.isin(rest, neighbors[v], assume_unique=True)]
                if nxt.size:
                    extend(new, nxt)

    for v in range(n):
        if neighbors[v].size:
            extend((v,), neighbors[v])
    return levels


def rips_complex(x, eps: float, max_dim: int) -> SimplicialComplex:
    """Rips complex: k-simplices are (k+1)-tuples pairwise within eps.

    Enumeration-based, so the size caps are hard errors rather than slow runs.
    """
    if max_dim < 1:
        raise DataError("max_dim must be at least 1")
    if max_dim > RIPS_MAX_DIM:
        raise DataError(f"max_dim capped at {RIPS_MAX_DIM} for enumeration")
    d = _distance_matrix(x)
    n = d.shape[0]
    if n > RIPS_MAX_POINTS:
        raise DataError(f"point count capped at {RIPS_MAX_POINTS} for enumeration")
    close = (d <= eps)
    np.fill_diagonal(close, False)
    neighbors = [np.nonzero(close[v, v + 1:])[0] + v + 1 for v in range(n)]
    simplices: list[tuple[int, ...]] = [(v,) for v in range(n)]
    for level in _cliques_upto(neighbors, max_dim + 1):
        simplices.extend(level)
    return SimplicialComplex(simplices)


def maxmin_landmarks(cloud: PointCloud, count: int, seed: int = 0) -> list[int]:
    """Greedy maxmin landmark selection; the first pick is seeded-random."""
    n = cloud.n
    if not 1 <= count <= n:
        raise DataError(f"count must be in [1, {n}]")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(n))
    chosen = [first]
    d = cloud.distances()
    min_d = d[first].copy()
    while len(chosen) < count:
        nxt = int(np.argmax(min_d))
        chosen.append(nxt)
        min_d = np.minimum(min_d, d[nxt])
    return chosen


def witness_complex(cloud: PointCloud, landmarks: Sequence[int], eps: float,
                    max_dim: int) -> SimplicialComplex:
    """Weak witness complex on the landmark vertices.

    A k-simplex enters when all its facets are in and some witness w satisfies
    max-distance-to-the-simplex <= eps + distance-to-its-(k+1)-th-closest
    landmark.  Every landmark is a vertex from eps = 0 on.  Vertices of the
    result are positions in the landmark list.
    """
    landmarks = [int(v) for v in landmarks]
    if not landmarks:
        raise DataError("landmark set must be nonempty")
    if len(set(landmarks)) != len(landmarks):
        raise DataError("landmark indices must be distinct")
    if max_dim < 1:
        raise DataError("max_dim must be at least 1")
    d_all = cloud.distances()
    if any(not 0 <= v < cloud.n for v in landmarks):
        raise DataError("landmark index out of range")
    d = d_all[:, landmarks]  # witnesses x landmarks
    d_sorted = np.sort(d, axis=1)
    n_l = len(landmarks)
    simplices: list[tuple[int, ...]] = [(v,) for v in range(n_l)]
    prev: set[frozenset] = {frozenset((v,)) for v in range(n_l)}
    for k in range(1, max_dim + 1):
        if k >= n_l:
            break
        slack = eps + d_sorted[:, min(k, n_l - 1)]
        current: set[frozenset] = set()
        for face in sorted(prev, key=lambda s: tuple(sorted(s))):
            face_t = tuple(sorted(face))
            start = face_t[-1] + 1
            for v in range(start, n_l):
                verts = face_t + (v,)
                if any(
                    frozenset(verts[:i] + verts[i + 1:]) not in prev
                    for i in range(len(verts))
                ):
                    continue
                reach = np.max(d[:, list(verts)], axis=1)
                if bool(np.any(reach <= slack)):
                    current.add(frozenset(verts))
        simplices.extend(tuple(sorted(s)) for s in current)
        prev = current
        if not current:
            break
    return SimplicialComplex(simplices)


def dtm(x, cloud: PointCloud, k: int, p: float = 2.0) -> float:
    """Distance to measure: power mean of the k nearest-neighbor distances."""
    if not 1 <= k <= cloud.n:
        raise DataError(f"k must be in [1, {cloud.n}]")
    if p <= 0:
        raise DataError("power p must be positive")
    dist = np.sort(cloud.distances_to(x))[:k]
    return float(np.mean(dist ** p) ** (1.0 / p))


class FilteredComplex:
    """Simplicial complex with a filtration time per simplex.

    Times must be monotone under the face relation: a simplex cannot appear
    before any of its faces.
    """

    def __init__(self, simplices_with_times: Iterable[tuple[Sequence[int], float]]):
        items = [(tuple(int(v) for v in s), float(t)) for s, t in simplices_with_times]
        self.complex = SimplicialComplex([s for s, _ in items])
        times: dict[frozenset, float] = {}
        for s, t in items:
            times[frozenset(s)] = t
        for s in self.complex.all_simplices():
            if frozenset(s) not in times:
                raise DataError(f"missing filtration time for face {s}")
        for s in self.complex.all_simplices():
            if len(s) > 1:
                t = times[frozenset(s)]
                for drop in range(len(s)):
                    face = frozenset(s[:drop] + s[drop + 1:])
                    if times[face] > t:
                        raise DataError(f"filtration time of {s} precedes its face")
        self.times = times

    def time_of(self, simplex) -> float:
        return self.times[frozenset(int(v) for v in simplex)]


def network_filtered_complex(net: WeightedNetwork,
                             convention: str = "above") -> FilteredComplex:
    """Encode a graph filtration as a sublevel filtered complex.

    Threshold-above scans edges from the heaviest down, so edge times are the
    negated weights with vertices entering first; threshold-below uses the raw
    weights with vertices at zero.
    """
    ii, jj, ww = net.edge_arrays()
    items: list[tuple[tuple[int, ...], float]] = []
    if convention == "above":
        v_time = -(float(np.max(ww)) + 1.0) if ww.size else -1.0
        edge_time = -ww
    elif convention == "below":
        v_time = 0.0
        edge_time = ww
    else:
        raise DataError(f"unknown convention {convention!r}")
    for v in range(net.p):
        items.append(((v,), v_time))
    for k in range(ww.size):
        items.append(((int(ii[k]), int(jj[k])), float(edge_time[k])))
    return FilteredComplex(items)


def persistence(fc: FilteredComplex, max_dim: int = 1) -> list[PersistenceDiagram]:
    """Persistence of a filtered complex by column reduction over GF(2).

    Simplices are processed in (time, dimension, vertex) order; when a column
    reduces to a nonzero pivot the pivot's simplex dies at the column's time.
    Unpaired simplices carry classes with death +inf.
    """
    order = sorted(
        fc.complex.all_simplices(),
        key=lambda s: (fc.times[frozenset(s)], len(s), tuple(sorted(s))),
    )
    pos = {frozenset(s): i for i, s in enumerate(order)}
    n = len(order)
    columns: list[Optional[set[int]]] = []
    for s in order:
        if len(s) == 1:
            columns.append(set())
            continue
        col = set()
        for drop in range(len(s)):
            col.add(pos[frozenset(s[:drop] + s[drop + 1:])])
        columns.append(col)
    low_owner: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    creators: set[int] = set()
    for j in range(n):
        col = columns[j]
        while col:
            low = max(col)
            owner = low_owner.get(low)
            if owner is None:
                break
            col ^= columns[owner]
        if col:
            low = max(col)
            low_owner[low] = j
            pairs.append((low, j))
            creators.discard(low)
        else:
            creators.add(j)
    by_dim: dict[int, list[tuple[float, float]]] = {k: [] for k in range(max_dim + 1)}
    for i, j in pairs:
        k = len(order[i]) - 1
        if k <= max_dim:
            birth = fc.times[frozenset(order[i])]
            death = fc.times[frozenset(order[j])]
            by_dim[k].append((birth, death))
    for i in creators:
        k = len(order[i]) - 1
        if k <= max_dim:
            by_dim[k].append((fc.times[frozenset(order[i])], math.inf))
    return [PersistenceDiagram(k, np.asarray(by_dim[k]).reshape(-1, 2))
            for k in range(max_dim + 1)]
