"""Diversity assignment passes (larger ``Individual.diversity`` means less crowded)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from .dominance import ObjectiveSpace
from .fitness import objective_matrix

__all__ = [
    "crowding_distances",
    "assign_crowding",
    "assign_sharing",
    "knn_distances",
    "assign_knn_density",
    "DummyDiversity",
    "Crowding",
    "Sharing",
    "NearestNeighbor",
    "DiversityStrategy",
    "AUTO",
]

AUTO = "auto"


def crowding_distances(F: np.ndarray) -> np.ndarray:
    """Crowding distance of each row of ``F``, all rows forming one front.

    Identical rows are collapsed before the computation and share the
    resulting value.  Ties inside one objective are broken by the remaining
    coordinates so the result does not depend on row order.
    """
    n = F.shape[0]
    if n == 0:
        return np.zeros(0)
    uniq, inverse = np.unique(F, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    m = uniq.shape[0]
    dist = np.zeros(m)
    if m <= 2:
        return np.full(n, np.inf)
    n_obj = uniq.shape[1]
    for j in range(n_obj):
        keys = [uniq[:, (j + s) % n_obj] for s in range(n_obj - 1, -1, -1)]
        order = np.lexsort(keys)
        col = uniq[order, j]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist[inverse]


def assign_crowding(pop, space: ObjectiveSpace, fronts: Optional[Sequence[Sequence[int]]] = None,
                    partial: bool = False):
    """Crowding distance computed front by front.

    ``fronts`` must partition the population indices; ``None`` treats the
    whole population as a single front.  With ``partial=True`` only the
    listed fronts are (re)computed and they need not cover everyone.
    """
    if fronts is None:
        fronts = [list(range(len(pop)))]
    seen = sorted(i for front in fronts for i in front)
    if partial:
        if len(set(seen)) != len(seen) or (seen and not 0 <= seen[0] <= seen[-1] < len(pop)):
            raise ValueError("fronts overlap or index outside the population")
        F = objective_matrix([pop[i] for i in seen], space)
        F_full = np.zeros((len(pop), space.n_objectives))
        F_full[seen] = F
        F = F_full
    else:
        if seen != list(range(len(pop))):
            raise ValueError("fronts do not partition the population")
        F = objective_matrix(pop, space)
    for front in fronts:
        front = list(front)
        for i, d in zip(front, crowding_distances(F[front])):
            pop[i].diversity = float(d)
    return pop


def assign_sharing(pop, space: ObjectiveSpace, sigma_share: float, alpha: float = 1.0):
    """Diversity is minus the niche count under the triangular sharing kernel."""
    if not sigma_share > 0:
        raise ValueError(f"sigma_share must be positive, got {sigma_share}")
    F = objective_matrix(pop, space)
    if len(pop) == 0:
        return pop
    d = cdist(F, F)
    sh = np.where(d < sigma_share, 1.0 - (d / sigma_share) ** alpha, 0.0)
    for ind, nc in zip(pop, sh.sum(axis=1)):
        ind.diversity = -float(nc)
    return pop


def _resolve_k(k, n: int) -> int:
    if k == AUTO or k is None:
        k = max(1, int(math.isqrt(n)))
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k >= n:
        warnings.warn(f"k={k} clamped to {n - 1} for a population of {n}", stacklevel=3)
        k = n - 1
    return k


def knn_distances(F: np.ndarray, k=AUTO) -> np.ndarray:
    n = F.shape[0]
    if n < 2:
        raise ValueError("nearest-neighbour density needs at least 2 members")
    k = _resolve_k(k, n)
    dist = cdist(F, F)
    np.fill_diagonal(dist, np.inf)
    dist.sort(axis=1)
    return dist[:, k - 1]


def assign_knn_density(pop, space: ObjectiveSpace, k=AUTO):
    """Diversity is the distance to the k-th nearest other member."""
    F = objective_matrix(pop, space)
    for ind, d in zip(pop, knn_distances(F, k)):
        ind.diversity = float(d)
    return pop


@dataclass(frozen=True)
class DummyDiversity:
    def assign(self, pop, space, fronts=None):
        for ind in pop:
            ind.diversity = 0.0


@dataclass(frozen=True)
class Crowding:
    def assign(self, pop, space, fronts=None):
        assign_crowding(pop, space, fronts)


@dataclass(frozen=True)
class Sharing:
    sigma_share: float
    alpha: float = 1.0

    def __post_init__(self):
        if not self.sigma_share > 0:
            raise ValueError(f"sigma_share must be positive, got {self.sigma_share}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def assign(self, pop, space, fronts=None):
        assign_sharing(pop, space, self.sigma_share, self.alpha)


@dataclass(frozen=True)
class NearestNeighbor:
    k: Union[int, str] = AUTO

    def __post_init__(self):
        if self.k != AUTO and int(self.k) < 1:
            raise ValueError(f"k must be >= 1 or 'auto', got {self.k}")

    def assign(self, pop, space, fronts=None):
        if len(pop) < 2:
            for ind in pop:
                ind.diversity = 0.0
            return
        assign_knn_density(pop, space, self.k)


DiversityStrategy = Union[DummyDiversity, Crowding, Sharing, NearestNeighbor]
