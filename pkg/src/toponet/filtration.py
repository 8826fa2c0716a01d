"""Graph filtration engine: Betti curves, graph barcodes, trees, node filtration,
and 1-d sublevel (Morse) persistence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .diagrams import PersistenceDiagram
from .networks import THRESHOLD_MODES, DataError, WeightedNetwork


class UnionFind:
    """Array-based disjoint sets with path halving; fixed element count."""

    __slots__ = ("parent", "n_components")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.n_components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.n_components -= 1
        return True


class FiltrationLevels(NamedTuple):
    """Sorted distinct positive edge weights plus their multiplicities."""

    values: np.ndarray
    multiplicities: np.ndarray


@dataclass(frozen=True)
class BettiCurve:
    """Exact step function of a Betti number over the filtration parameter.

    ``values`` has one more entry than ``breakpoints``: values[i] holds on the
    interval between breakpoints i-1 and i.  ``side`` records which endpoint a
    jump belongs to: "right" means the curve is right-continuous (value changes
    at the breakpoint, the threshold-above convention), "left" means the change
    happens just after it (threshold-below).
    """

    dim: int
    breakpoints: np.ndarray
    values: np.ndarray
    side: str = "right"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=np.int64)
        if bp.ndim != 1 or vals.ndim != 1 or vals.size != bp.size + 1:
            raise DataError("need len(values) == len(breakpoints) + 1")
        if bp.size > 1 and np.any(np.diff(bp) <= 0):
            raise DataError("breakpoints must be strictly increasing")
        if self.side not in ("right", "left"):
            raise DataError(f"unknown side {self.side!r}")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        bp.setflags(write=False)
        vals.setflags(write=False)

    def value_at(self, eps: float) -> int:
        return int(self.values_at(np.asarray([eps]))[0])

    def values_at(self, eps) -> np.ndarray:
        eps = np.asarray(eps, dtype=float)
        side = "right" if self.side == "right" else "left"
        idx = np.searchsorted(self.breakpoints, eps, side=side)
        return self.values[idx]

    def sample(self, grid) -> np.ndarray:
        return self.values_at(grid)


@dataclass(frozen=True)
class GraphBarcode:
    """Birth/death decomposition of a graph filtration.

    births0 holds the component events (forest edge weights), deaths1 the cycle
    events (all remaining edge weights); together they partition the edge
    weight multiset.  death_level is the common finite death assigned to
    component classes when a diagram is requested.
    """

    births0: np.ndarray
    deaths1: np.ndarray
    death_level: float
    p: int
    n_components: int
    convention: str = "above"

    def __post_init__(self):
        b0 = np.sort(np.asarray(self.births0, dtype=float))
        d1 = np.sort(np.asarray(self.deaths1, dtype=float))
        object.__setattr__(self, "births0", b0)
        object.__setattr__(self, "deaths1", d1)
        b0.setflags(write=False)
        d1.setflags(write=False)

    def to_diagram(self, dim: int) -> PersistenceDiagram:
        c = self.death_level
        if dim == 0:
            if self.convention == "above":
                pts = np.column_stack([self.births0, np.full(self.births0.size, c)])
            else:
                pts = np.column_stack([np.zeros(self.births0.size), self.births0])
        elif dim == 1:
            if self.convention == "above":
                pts = np.column_stack([np.zeros(self.deaths1.size), self.deaths1])
            else:
                pts = np.column_stack([self.deaths1, np.full(self.deaths1.size, c)])
        else:
            raise DataError("graph filtrations only carry dimensions 0 and 1")
        return PersistenceDiagram(dim, pts)


class EdgeDecomposition(NamedTuple):
    """Per-edge split of a network into forest (component) and cycle edges."""

    i: np.ndarray
    j: np.ndarray
    w: np.ndarray
    is_forest: np.ndarray
    n_components: int


def _decompose_edges(net: WeightedNetwork, descending: bool) -> EdgeDecomposition:
    """Kruskal pass over the positive edges; deterministic (weight, i, j) order."""
    ii, jj, ww = net.edge_arrays()
    if descending:
        order = np.lexsort((jj, ii, -ww))
    else:
        order = np.lexsort((jj, ii, ww))
    ii, jj, ww = ii[order], jj[order], ww[order]
    uf = UnionFind(net.p)
    forest = np.zeros(ww.size, dtype=bool)
    parent = uf.parent
    for k in range(ww.size):
        a = int(ii[k])
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = int(jj[k])
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[b] = a
            uf.n_components -= 1
            forest[k] = True
    return EdgeDecomposition(ii, jj, ww, forest, uf.n_components)


def maximal_filtration(net: WeightedNetwork) -> FiltrationLevels:
    """Sorted distinct positive edge weights: the only thresholds where the
    binary graph can change."""
    w = net.edge_weights()
    values, counts = np.unique(w, return_counts=True)
    return FiltrationLevels(values, counts)


def _step_curve(p: int, dim: int, event_weights: np.ndarray, n_events_total: int,
                convention: str) -> BettiCurve:
    values, counts = np.unique(event_weights, return_counts=True)
    cum = np.concatenate([[0], np.cumsum(counts)])
    if convention == "above":
        if dim == 0:
            # p - (# forest weights above eps); rises by counts at each value
            level = (p - n_events_total) + cum
        else:
            # count of cycle weights above eps; falls by counts
            level = n_events_total - cum
        side = "right"
    else:
        if dim == 0:
            level = p - cum
        else:
            level = cum
        side = "left"
    return BettiCurve(dim, values, level, side)


def betti_curve(net: WeightedNetwork, dim: int, convention: str = "above") -> BettiCurve:
    """Exact Betti curve over the maximal graph filtration.

    Under threshold-above, components only split as eps grows so the 0-curve is
    nondecreasing and the 1-curve nonincreasing; threshold-below mirrors both.
    The 1-curve uses the Euler relation beta1 = beta0 - p + q_eps.
    """
    if dim not in (0, 1):
        raise DataError("graph Betti curves exist for dim 0 and 1 only")
    if convention not in THRESHOLD_MODES:
        raise DataError(f"unknown convention {convention!r}")
    dec = _decompose_edges(net, descending=(convention == "above"))
    event = dec.w[dec.is_forest] if dim == 0 else dec.w[~dec.is_forest]
    return _step_curve(net.p, dim, event, event.size, convention)


def default_death_level(weights: np.ndarray) -> float:
    """Reproducible death level just past the largest weight."""
    if weights.size == 0:
        return 1.0
    w_max = float(np.max(weights))
    w_min = float(np.min(weights))
    if w_max > w_min:
        return w_max + 0.01 * (w_max - w_min)
    return w_max + 1.0


def graph_barcode(net: WeightedNetwork, death_level: Optional[float] = None,
                  convention: str = "above") -> GraphBarcode:
    """Partition the edge weights into 0-d component events and 1-d cycle events.

    Under threshold-above the component events are exactly the maximum
    spanning forest weights (a split happens when a forest edge drops out);
    everything else closes a cycle.  Threshold-below uses the minimum
    spanning forest and swaps the birth/death roles.
    """
    if convention not in THRESHOLD_MODES:
        raise DataError(f"unknown convention {convention!r}")
    dec = _decompose_edges(net, descending=(convention == "above"))
    births0 = dec.w[dec.is_forest]
    deaths1 = dec.w[~dec.is_forest]
    if death_level is None:
        death_level = default_death_level(dec.w)
    elif dec.w.size and death_level <= float(np.max(dec.w)):
        raise DataError("death_level must exceed the largest edge weight")
    return GraphBarcode(births0, deaths1, float(death_level), net.p,
                        dec.n_components, convention)


def tree_betti_coordinates(tree: WeightedNetwork) -> list[tuple[float, int]]:
    """Closed-form 0-d Betti coordinates for a forest with distinct weights.

    A connected tree yields (0, 1), (w_(1), 2), ..., (w_(p-1), p): every edge
    removal splits off exactly one component.
    """
    dec = _decompose_edges(tree, descending=True)
    if not bool(np.all(dec.is_forest)):
        raise DataError("input has a cycle; tree coordinates need a forest")
    w = np.sort(dec.w)
    if np.unique(w).size != w.size:
        raise DataError("tree edge weights must be distinct")
    start = tree.p - w.size
    coords = [(0.0, start)]
    coords.extend((float(w[k]), start + k + 1) for k in range(w.size))
    return coords


@dataclass(frozen=True)
class NodeFiltrationLevel:
    lam: float
    n_nodes: int
    n_edges: int
    beta0: int


@dataclass(frozen=True)
class NodeFiltration:
    curve: BettiCurve
    levels: tuple[NodeFiltrationLevel, ...]


def node_filtration(adjacency, node_weights) -> NodeFiltration:
    """Sublevel filtration driven by node weights.

    Node i enters at its weight, edge (i, j) at max(w_i, w_j); returns the
    component count as a function of the level plus the nested-graph sizes.
    Ties across nodes are processed by node index.
    """
    adj = np.asarray(adjacency)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise DataError("adjacency must be square")
    if not np.array_equal(adj, adj.T):
        raise DataError("adjacency must be symmetric")
    w = np.asarray(node_weights, dtype=float).reshape(-1)
    p = adj.shape[0]
    if w.size != p:
        raise DataError("need one weight per node")
    order = np.lexsort((np.arange(p), w))
    uf = UnionFind(p)
    active = np.zeros(p, dtype=bool)
    ei, ej = np.nonzero(np.triu(adj, 1))
    edge_level = np.maximum(w[ei], w[ej])
    edge_order = np.argsort(edge_level, kind="stable")
    levels: list[NodeFiltrationLevel] = []
    breakpoints: list[float] = []
    values: list[int] = [0]
    n_active = 0
    n_edges_active = 0
    pos = 0
    e_pos = 0
    uniq = np.unique(w)
    for lam in uniq:
        while pos < p and w[order[pos]] == lam:
            active[order[pos]] = True
            n_active += 1
            pos += 1
        while e_pos < ei.size and edge_level[edge_order[e_pos]] <= lam:
            k = edge_order[e_pos]
            uf.union(int(ei[k]), int(ej[k]))
            n_edges_active += 1
            e_pos += 1
        roots = {uf.find(v) for v in range(p) if active[v]}
        beta0 = len(roots)
        breakpoints.append(float(lam))
        values.append(beta0)
        levels.append(NodeFiltrationLevel(float(lam), n_active, n_edges_active, beta0))
    curve = BettiCurve(0, np.asarray(breakpoints), np.asarray(values), side="right")
    return NodeFiltration(curve, tuple(levels))


@dataclass(frozen=True)
class MorseSignal:
    """1-d sampled signal; plateaus collapse to a single representative."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).reshape(-1)
        if s.size < 2:
            raise DataError("need at least two samples")
        if not np.all(np.isfinite(s)):
            raise DataError("samples must be finite")
        object.__setattr__(self, "samples", s)
        self.samples.setflags(write=False)

    def collapsed(self) -> np.ndarray:
        s = self.samples
        keep = np.concatenate([[True], np.diff(s) != 0.0])
        return s[keep]

    def critical_points(self) -> tuple[np.ndarray, np.ndarray]:
        """(minima values, interior maxima values) after plateau collapse."""
        s = self.collapsed()
        n = s.size
        minima, maxima = [], []
        for t in range(n):
            left = s[t - 1] if t > 0 else None
            right = s[t + 1] if t < n - 1 else None
            if (left is None or left > s[t]) and (right is None or right > s[t]):
                minima.append(s[t])
            if left is not None and right is not None and left < s[t] and right < s[t]:
                maxima.append(s[t])
        return np.asarray(minima), np.asarray(maxima)


def morse_pairs_1d(signal: MorseSignal) -> PersistenceDiagram:
    """Sublevel-set persistence of a sampled 1-d signal.

    Local minima give births; when the sweep passes an interior maximum the two
    flanking components merge and the younger one (the higher minimum) dies
    there.  The surviving class of the global minimum is closed at the largest
    sample value.
    """
    s = signal.collapsed()
    n = s.size
    order = np.lexsort((np.arange(n), s))
    uf = UnionFind(n)
    active = np.zeros(n, dtype=bool)
    comp_min: dict[int, float] = {}
    pairs: list[tuple[float, float]] = []
    for idx in order:
        idx = int(idx)
        active[idx] = True
        comp_min[idx] = float(s[idx])
        for nb in (idx - 1, idx + 1):
            if 0 <= nb < n and active[nb]:
                ra, rb = uf.find(idx), uf.find(nb)
                if ra == rb:
                    continue
                keep, kill = (ra, rb) if comp_min[ra] <= comp_min[rb] else (rb, ra)
                # a regular point sliding into a component merges at its own
                # value; only interior maxima produce real (birth < death) pairs
                if comp_min[kill] < s[idx]:
                    pairs.append((comp_min[kill], float(s[idx])))
                uf.parent[kill] = keep
                comp_min[keep] = min(comp_min[keep], comp_min[kill])
    global_min = float(np.min(s))
    global_max = float(np.max(s))
    pairs.append((global_min, global_max))
    return PersistenceDiagram(0, np.asarray(pairs))
