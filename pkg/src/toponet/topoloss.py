"""Topological loss by optimal matching of graph-filtration births/deaths,
a persistence-diagram regularizer, and topologically penalized network
regression."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .diagrams import PersistenceDiagram
from .filtration import _decompose_edges
from .networks import DataError, WeightedNetwork

DEFAULT_STEP_FRACTION = 0.1
MAX_HALVINGS = 40


@dataclass(frozen=True)
class BirthDeathDecomposition:
    """Edge weights split into 0-d birth values and 1-d death values.

    The two multisets partition the edge weights: forest edges carry the
    component events, the rest close cycles.  Edge-level arrays are kept so a
    loss gradient can flow back to individual weights.
    """

    births0: np.ndarray
    deaths1: np.ndarray
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_w: np.ndarray
    is_forest: np.ndarray
    p: int
    n_components: int

    @property
    def q(self) -> int:
        return self.edge_w.size


def birth_death_decomposition(net: WeightedNetwork) -> BirthDeathDecomposition:
    dec = _decompose_edges(net, descending=True)
    return BirthDeathDecomposition(
        births0=np.sort(dec.w[dec.is_forest]),
        deaths1=np.sort(dec.w[~dec.is_forest]),
        edge_i=dec.i,
        edge_j=dec.j,
        edge_w=dec.w,
        is_forest=dec.is_forest,
        p=net.p,
        n_components=dec.n_components,
    )


def _padded_pair(a: np.ndarray, b: np.ndarray, pad_a: float, pad_b: float):
    """Equalize multiset sizes; the shorter side is padded with its own
    network's extreme weight, then both are sorted for the optimal matching."""
    if a.size < b.size:
        a = np.concatenate([a, np.full(b.size - a.size, pad_a)])
    elif b.size < a.size:
        b = np.concatenate([b, np.full(a.size - b.size, pad_b)])
    return np.sort(a), np.sort(b)


def _matched_targets(source: BirthDeathDecomposition,
                     target: BirthDeathDecomposition) -> np.ndarray:
    """Per-edge matched value in the target for each source edge weight.

    Source edges are matched within their class (component events to component
    events, cycle events to cycle events) by sorted order; when the target has
    fewer values the paper's padding rule applies: missing component events
    stand in as the target's largest edge weight, missing cycle events as the
    smallest.
    """
    out = np.empty(source.q)
    t_max = float(np.max(target.edge_w)) if target.q else 0.0
    t_min = float(np.min(target.edge_w)) if target.q else 0.0
    for forest, pad in ((True, t_max), (False, t_min)):
        mask = source.is_forest == forest
        vals = source.edge_w[mask]
        order = np.argsort(vals, kind="stable")
        tgt = target.births0 if forest else target.deaths1
        matched = np.empty(vals.size)
        k = min(vals.size, tgt.size)
        matched[order[:k]] = tgt[:k]
        matched[order[k:]] = pad
        out[mask] = matched
    return out


def top_loss(g1: WeightedNetwork, g2: WeightedNetwork) -> float:
    """Optimal matching cost between the birth/death decompositions.

    Within each class the optimal bijection pairs sorted values, so the loss is
    the squared gap of sorted birth sets plus the squared gap of sorted death
    sets (no square root, by definition).
    """
    d1 = birth_death_decomposition(g1)
    d2 = birth_death_decomposition(g2)
    w1_max = float(np.max(d1.edge_w)) if d1.q else 0.0
    w1_min = float(np.min(d1.edge_w)) if d1.q else 0.0
    w2_max = float(np.max(d2.edge_w)) if d2.q else 0.0
    w2_min = float(np.min(d2.edge_w)) if d2.q else 0.0
    b1, b2 = _padded_pair(d1.births0, d2.births0, w1_max, w2_max)
    e1, e2 = _padded_pair(d1.deaths1, d2.deaths1, w1_min, w2_min)
    return float(np.sum((b1 - b2) ** 2) + np.sum((e1 - e2) ** 2))


def pd_regularizer(pd: PersistenceDiagram, p: float, q: float, i0: int = 1) -> float:
    """Persistence penalty sum_{i >= i0} (d-b)^p ((d+b)/2)^q over points ranked
    by persistence (rank 1 = most persistent)."""
    if p < 0 or q < 0:
        raise DataError("powers p and q must be nonnegative")
    if i0 < 1:
        raise DataError("i0 is a 1-based rank")
    if not len(pd):
        return 0.0
    pts = pd.points
    if not np.all(np.isfinite(pts)):
        raise DataError("diagram has infinite deaths; truncate to a death level first")
    pers = pts[:, 1] - pts[:, 0]
    order = np.argsort(-pers, kind="stable")
    tail = pts[order[i0 - 1:]]
    if tail.size == 0:
        return 0.0
    lengths = tail[:, 1] - tail[:, 0]
    mids = 0.5 * (tail[:, 1] + tail[:, 0])
    return float(np.sum(np.power(lengths, p) * np.power(mids, q)))


@dataclass(frozen=True)
class RegressionProblem:
    observations: tuple[WeightedNetwork, ...]
    prior: WeightedNetwork
    lam: float
    max_iter: int = 200
    step_size: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))
        if not self.observations:
            raise DataError("need at least one observed network")
        p = self.prior.p
        if any(g.p != p for g in self.observations):
            raise DataError("all networks must share the node count")
        if self.lam < 0:
            raise DataError("lambda must be nonnegative")
        if self.step_size is not None and self.step_size <= 0:
            raise DataError("step size must be positive")
        if self.max_iter < 1:
            raise DataError("iteration budget must be positive")


@dataclass(frozen=True)
class RegressionResult:
    estimate: WeightedNetwork
    trace: tuple[float, ...]
    converged: bool


def _upper_to_net(theta: np.ndarray, p: int) -> WeightedNetwork:
    w = np.zeros((p, p))
    iu = np.triu_indices(p, 1)
    w[iu] = theta
    return WeightedNetwork(w + w.T, convention="similarity")


def _total_loss(theta: np.ndarray, p: int, mean_u: np.ndarray,
                obs_sq_residual: float, lam: float,
                prior: WeightedNetwork) -> float:
    # (1/n) sum_k |Theta - G_k|_F^2 expanded around the mean:
    # 2 * sum_{i<j} (theta - mean)^2 + constant residual term
    data = 2.0 * float(np.sum((theta - mean_u) ** 2)) + obs_sq_residual
    if lam == 0.0:
        return data
    return data + lam * top_loss(_upper_to_net(theta, p), prior)


def topo_regression(problem: RegressionProblem) -> RegressionResult:
    """First-order minimization of data fit plus topological penalty.

    The matching inside the penalty is frozen per iteration (it is piecewise
    constant in the weights), giving a subgradient; a halving line search keeps
    the recorded loss trace nonincreasing.  Starting from the observation mean
    makes the lam = 0 case exact immediately.
    """
    p = problem.prior.p
    iu = np.triu_indices(p, 1)
    obs = np.stack([g.weights[iu] for g in problem.observations])
    mean_u = obs.mean(axis=0)
    obs_sq_residual = 2.0 * float(np.sum((obs - mean_u) ** 2)) / obs.shape[0]
    prior_dec = birth_death_decomposition(problem.prior)
    theta = mean_u.copy()
    all_w = np.concatenate([obs.ravel(), problem.prior.weights[iu]])
    spread = float(np.max(all_w) - np.min(all_w)) if all_w.size else 1.0
    step = problem.step_size or DEFAULT_STEP_FRACTION * (spread if spread > 0 else 1.0)

    loss = _total_loss(theta, p, mean_u, obs_sq_residual, problem.lam, problem.prior)
    trace = [loss]
    converged = problem.lam == 0.0
    for _ in range(problem.max_iter if problem.lam > 0 else 0):
        net = _upper_to_net(theta, p)
        src = birth_death_decomposition(net)
        grad = 4.0 * (theta - mean_u)
        if src.q:
            tgt = _matched_targets(src, prior_dec)
            g_topo = np.zeros_like(theta)
            flat = src.edge_i * p + src.edge_j
            iu_flat = iu[0] * p + iu[1]
            pos = np.searchsorted(iu_flat, flat)
            g_topo[pos] = 2.0 * (src.edge_w - tgt)
            grad = grad + problem.lam * g_topo
        eta = step
        improved = False
        for _halve in range(MAX_HALVINGS):
            trial = np.clip(theta - eta * grad, 0.0, None)
            trial_loss = _total_loss(trial, p, mean_u, obs_sq_residual,
                                     problem.lam, problem.prior)
            if trial_loss <= loss:
                improved = trial_loss < loss - 1e-15 * (1.0 + abs(loss))
                theta = trial
                loss = trial_loss
                break
            eta *= 0.5
        trace.append(loss)
        if not improved:
            converged = True
            break
    return RegressionResult(_upper_to_net(theta, p), tuple(trace), converged)
