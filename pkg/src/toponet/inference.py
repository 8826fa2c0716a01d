"""Statistical inference on topological distances: the exact Kolmogorov-Smirnov
p-value series, permutation tests on between-group distance, and incremental
transposition updates."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .networks import DataError, WeightedNetwork

SERIES_TOL = 1e-16
PVALUE_MODES = ("continuous", "paper_integer")


def worker_count() -> int:
    """Thread cap from TOPONET_THREADS, defaulting to a small pool."""
    env = os.environ.get("TOPONET_THREADS")
    hw = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), hw))
        except ValueError:
            raise DataError(f"TOPONET_THREADS must be an integer, got {env!r}")
    return min(4, hw)


def ks_pvalue(dq: float, q: int, mode: str = "continuous") -> float:
    """Asymptotic null p-value of the Betti-curve sup statistic.

    The alternating series 2 sum (-1)^(i-1) exp(-2 i^2 d^2) is evaluated with
    d = Dq / sqrt(2q); the paper_integer mode instead rounds d up to the least
    integer strictly greater.  The sum is clamped into [0, 1].
    """
    if dq < 0:
        raise DataError("the distance statistic must be nonnegative")
    if q < 1:
        raise DataError("q must be at least 1")
    if mode not in PVALUE_MODES:
        raise DataError(f"unknown mode {mode!r}")
    d = dq / math.sqrt(2.0 * q)
    if mode == "paper_integer":
        d = float(math.floor(d) + 1)
    if d == 0.0:
        # the alternating series oscillates at zero; the limit from above is 1
        return 1.0
    total = 0.0
    i = 1
    while True:
        term = 2.0 * math.exp(-2.0 * i * i * d * d)
        if term < SERIES_TOL:
            break
        total += term if i % 2 == 1 else -term
        i += 1
        if i > 100_000:
            break
    return float(min(1.0, max(0.0, total)))


DistanceFn = Callable[[WeightedNetwork, WeightedNetwork], float]


@dataclass(frozen=True)
class TwoSampleProblem:
    group1: tuple[WeightedNetwork, ...]
    group2: tuple[WeightedNetwork, ...]
    distance: DistanceFn

    def __post_init__(self):
        object.__setattr__(self, "group1", tuple(self.group1))
        object.__setattr__(self, "group2", tuple(self.group2))
        if not self.group1 or not self.group2:
            raise DataError("both groups must be nonempty")

    @property
    def m(self) -> int:
        return len(self.group1)

    @property
    def n(self) -> int:
        return len(self.group2)

    def pooled(self) -> tuple[WeightedNetwork, ...]:
        return self.group1 + self.group2


def pairwise_distances(networks: Sequence[WeightedNetwork],
                       distance: DistanceFn) -> np.ndarray:
    """Symmetric pairwise distance matrix, pairs evaluated on a thread pool."""
    n = len(networks)
    out = np.zeros((n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def run(pair):
        i, j = pair
        return i, j, float(distance(networks[i], networks[j]))

    workers = worker_count()
    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]
    for i, j, val in results:
        out[i, j] = out[j, i] = val
    return out


def _between_sum(dist: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> float:
    return float(dist[np.ix_(g1, g2)].sum())


@dataclass(frozen=True)
class PermutationResult:
    observed: float
    p_value: float
    null: np.ndarray
    n_perm: int
    seed: int

    def null_quantiles(self, qs=(0.05, 0.25, 0.5, 0.75, 0.95)) -> dict[str, float]:
        return {f"{q:g}": float(np.quantile(self.null, q)) for q in qs}


def permutation_test(problem: TwoSampleProblem, n_perm: int, seed: int = 0) -> PermutationResult:
    """Permutation test on the average between-group distance.

    The full pairwise distance matrix is computed once; each relabeling only
    re-aggregates entries.  Each permutation draws from its own (seed, index)
    stream so results do not depend on evaluation order.
    """
    if n_perm < 1:
        raise DataError("n_perm must be at least 1")
    m, n = problem.m, problem.n
    if m + n < 3:
        raise DataError("need at least three networks overall")
    dist = pairwise_distances(problem.pooled(), problem.distance)
    g1 = np.arange(m)
    g2 = np.arange(m, m + n)
    observed = _between_sum(dist, g1, g2) / (m * n)
    null = np.empty(n_perm)
    for t in range(n_perm):
        rng = np.random.default_rng([seed, t])
        perm = rng.permutation(m + n)
        null[t] = _between_sum(dist, perm[:m], perm[m:]) / (m * n)
    p = (1.0 + float(np.count_nonzero(null >= observed))) / (1.0 + n_perm)
    return PermutationResult(observed, p, null, n_perm, seed)


@dataclass
class TranspositionState:
    """Running between-group sum under an explicit group labeling.

    Holds the cached pairwise matrix so a single label swap updates the
    statistic in O(m + n) instead of a full recomputation.
    """

    dist: np.ndarray
    group1: np.ndarray
    group2: np.ndarray
    between_sum: float

    @classmethod
    def from_problem(cls, problem: TwoSampleProblem) -> "TranspositionState":
        dist = pairwise_distances(problem.pooled(), problem.distance)
        g1 = np.arange(problem.m)
        g2 = np.arange(problem.m, problem.m + problem.n)
        return cls(dist, g1, g2, _between_sum(dist, g1, g2))

    @property
    def statistic(self) -> float:
        return self.between_sum / (self.group1.size * self.group2.size)


def transposition_step(state: TranspositionState, swap: tuple[int, int]) -> TranspositionState:
    """Exchange group labels of one pair (position in group1, position in group2).

    Returns a new state whose between-group sum was updated incrementally.
    """
    a_pos, b_pos = swap
    g1, g2 = state.group1, state.group2
    if not 0 <= a_pos < g1.size or not 0 <= b_pos < g2.size:
        raise DataError("swap indices out of range")
    x = int(g1[a_pos])
    y = int(g2[b_pos])
    d = state.dist
    others1 = np.delete(g1, a_pos)
    others2 = np.delete(g2, b_pos)
    delta = float(np.sum(d[others1, x]) - np.sum(d[others1, y])
                  + np.sum(d[y, others2]) - np.sum(d[x, others2]))
    new_g1 = g1.copy()
    new_g2 = g2.copy()
    new_g1[a_pos] = y
    new_g2[b_pos] = x
    return TranspositionState(d, new_g1, new_g2, state.between_sum + delta)
