"""Fitness assignment passes.

Each pass reads the objective vectors of a whole population and writes
``Individual.fitness``.  Fitness is always larger-is-better; schemes whose
natural scale runs the other way (rank, depth, SPEA2, achievement) are
negated when written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from .dominance import DominanceRelation, ObjectiveSpace, Pareto, dominance_matrix
from .solution import Individual

__all__ = [
    "objective_matrix",
    "fast_nondominated_sort",
    "assign_dominance_rank",
    "assign_dominance_count",
    "assign_dominance_depth",
    "assign_spea2_fitness",
    "spea2_scores",
    "AdditiveEpsilon",
    "HypervolumeDifference",
    "pairwise_indicator",
    "assign_indicator_fitness",
    "assign_achievement_scalarizing",
    "DummyFitness",
    "AchievementScalarizing",
    "DominanceRank",
    "DominanceCount",
    "DominanceDepth",
    "Spea2",
    "IndicatorBased",
    "FitnessStrategy",
]


def objective_matrix(pop: Sequence[Individual], space: ObjectiveSpace) -> np.ndarray:
    """Stack the objective vectors of ``pop`` in minimization form.

    Raises:
        ValueError: if a member is not valid (objectives stale or missing).
    """
    for i, ind in enumerate(pop):
        if not ind.valid or ind.objectives is None:
            raise ValueError(f"member {i} has no up-to-date objective vector")
    if not pop:
        return np.zeros((0, space.n_objectives))
    return space.to_min(np.stack([ind.objectives for ind in pop]))


def fast_nondominated_sort(D: np.ndarray) -> list[list[int]]:
    """Split indices into successive nondominated layers given a dominance matrix.

    Members left over by a dominance cycle (possible only for non-transitive
    relations) are put together in a final layer.
    """
    n = D.shape[0]
    remaining_dominators = D.sum(axis=0).astype(np.int64)
    assigned = np.zeros(n, dtype=bool)
    fronts = []
    current = np.flatnonzero(remaining_dominators == 0)
    while current.size:
        fronts.append(current.tolist())
        assigned[current] = True
        remaining_dominators -= D[current].sum(axis=0)
        current = np.flatnonzero((remaining_dominators == 0) & ~assigned)
    if not assigned.all():
        fronts.append(np.flatnonzero(~assigned).tolist())
    return fronts


def assign_dominance_rank(pop, space: ObjectiveSpace, rel: DominanceRelation = Pareto()):
    """Fitness is minus the number of members dominating each individual."""
    D = dominance_matrix(objective_matrix(pop, space), rel, space)
    for ind, r in zip(pop, D.sum(axis=0)):
        ind.fitness = -float(r)
    return pop


def assign_dominance_count(pop, space: ObjectiveSpace, rel: DominanceRelation = Pareto()):
    """Fitness is the number of members each individual dominates."""
    D = dominance_matrix(objective_matrix(pop, space), rel, space)
    for ind, c in zip(pop, D.sum(axis=1)):
        ind.fitness = float(c)
    return pop


def assign_dominance_depth(pop, space: ObjectiveSpace, rel: DominanceRelation = Pareto()):
    """Fitness is minus the index of the nondominated layer each individual sits in.

    Returns:
        ``(pop, fronts)`` where ``fronts`` lists member indices layer by layer.
    """
    D = dominance_matrix(objective_matrix(pop, space), rel, space)
    fronts = fast_nondominated_sort(D)
    for k, front in enumerate(fronts):
        for i in front:
            pop[i].fitness = -float(k)
    return pop, fronts


def _kth_neighbour_distance(F: np.ndarray, k: int) -> np.ndarray:
    dist = cdist(F, F)
    np.fill_diagonal(dist, np.inf)
    dist.sort(axis=1)
    return dist[:, k - 1]


def spea2_scores(F_min: np.ndarray, rel: DominanceRelation, space: ObjectiveSpace):
    """Raw fitness ``R`` and density ``D`` of every row (smaller is better for both)."""
    n = F_min.shape[0]
    Dm = dominance_matrix(F_min, rel, space)
    strength = Dm.sum(axis=1).astype(float)
    raw = Dm.T.astype(float) @ strength
    if n < 2:
        return raw, np.zeros(n)
    k = min(max(1, int(math.isqrt(n))), n - 1)
    density = 1.0 / (_kth_neighbour_distance(F_min, k) + 2.0)
    return raw, density


def assign_spea2_fitness(pop, space: ObjectiveSpace, archive_members=(),
                         rel: DominanceRelation = Pareto()):
    """SPEA2 strength fitness computed over ``pop`` plus ``archive_members``.

    Only the members of ``pop`` are written; archive members take part in the
    strength and density computation but keep their own scores.
    """
    union = list(pop) + list(archive_members)
    F = objective_matrix(union, space)
    raw, density = spea2_scores(F, rel, space)
    for ind, r, d in zip(pop, raw, density):
        ind.fitness = -float(r + d)
    return pop


# --------------------------------------------------------------------------
# Indicator-based fitness
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AdditiveEpsilon:
    name = "eps+"


@dataclass(frozen=True)
class HypervolumeDifference:
    """Hypervolume-difference indicator; ``reference`` is in normalised coordinates."""

    reference: tuple[float, ...]

    name = "hvd"

    def __post_init__(self):
        ref = tuple(float(r) for r in self.reference)
        if not all(math.isfinite(r) for r in ref):
            raise ValueError("hypervolume reference must be finite")
        object.__setattr__(self, "reference", ref)


BinaryIndicator = Union[AdditiveEpsilon, HypervolumeDifference]


def _normalise(F_min: np.ndarray) -> np.ndarray:
    lo = F_min.min(axis=0)
    span = F_min.max(axis=0) - lo
    out = np.zeros_like(F_min)
    varying = span > 0
    out[:, varying] = (F_min[:, varying] - lo[varying]) / span[varying]
    return out


def pairwise_indicator(F: np.ndarray, indicator: BinaryIndicator) -> np.ndarray:
    """``M[i, j] = I({F[i]}, {F[j]})`` for singleton sets (minimization form)."""
    if isinstance(indicator, AdditiveEpsilon):
        M = F[:, 0, None] - F[None, :, 0]
        for j in range(1, F.shape[1]):
            np.maximum(M, F[:, j, None] - F[None, :, j], out=M)
        return M
    a = F[:, None, :]
    b = F[None, :, :]
    if isinstance(indicator, HypervolumeDifference):
        ref = np.asarray(indicator.reference, dtype=float)
        if ref.shape[0] != F.shape[1]:
            raise ValueError("hypervolume reference does not match the number of objectives")
        box = np.prod(np.clip(ref - F, 0.0, None), axis=1)
        overlap = np.prod(np.clip(ref - np.maximum(a, b), 0.0, None), axis=2)
        weakly = np.all(a <= b, axis=2)
        # y weakly dominates x: I = HV(x) - HV(y); otherwise HV({x, y}) - HV(y)
        return np.where(weakly, box[None, :] - box[:, None], box[None, :] - overlap)
    raise TypeError(f"unknown binary indicator {indicator!r}")


def assign_indicator_fitness(pop, space: ObjectiveSpace, indicator: BinaryIndicator = AdditiveEpsilon(),
                             kappa: float = 0.05):
    """IBEA fitness: ``sum_{y != x} -exp(-I(y, x) / kappa)`` on min-max normalised objectives."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    F = objective_matrix(pop, space)
    if len(pop) == 0:
        return pop
    M = pairwise_indicator(_normalise(F), indicator)
    contrib = -np.exp(-M / kappa)
    np.fill_diagonal(contrib, 0.0)
    for ind, f in zip(pop, contrib.sum(axis=0)):
        ind.fitness = float(f)
    return pop


def assign_achievement_scalarizing(pop, space: ObjectiveSpace, weights, reference, rho: float = 1e-6):
    """Augmented achievement function, negated so that larger is better."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (space.n_objectives,) or np.any(w <= 0):
        raise ValueError("weights must be positive, one per objective")
    r = space.to_min(np.asarray(reference, dtype=float))
    F = objective_matrix(pop, space)
    scaled = w * (F - r)
    values = scaled.max(axis=1) + rho * scaled.sum(axis=1)
    for ind, v in zip(pop, values):
        ind.fitness = -float(v)
    return pop


# --------------------------------------------------------------------------
# Strategy objects
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DummyFitness:
    def assign(self, pop, space, archive_members=()):
        for ind in pop:
            ind.fitness = 0.0
        return None


@dataclass(frozen=True)
class AchievementScalarizing:
    weights: tuple[float, ...]
    reference: tuple[float, ...]
    rho: float = 1e-6

    def assign(self, pop, space, archive_members=()):
        assign_achievement_scalarizing(pop, space, self.weights, self.reference, self.rho)
        return None


@dataclass(frozen=True)
class DominanceRank:
    relation: DominanceRelation = field(default_factory=Pareto)

    def assign(self, pop, space, archive_members=()):
        assign_dominance_rank(pop, space, self.relation)
        return None


@dataclass(frozen=True)
class DominanceCount:
    relation: DominanceRelation = field(default_factory=Pareto)

    def assign(self, pop, space, archive_members=()):
        assign_dominance_count(pop, space, self.relation)
        return None


@dataclass(frozen=True)
class DominanceDepth:
    relation: DominanceRelation = field(default_factory=Pareto)

    def assign(self, pop, space, archive_members=()):
        """Returns the fronts, which crowding diversity reuses."""
        return assign_dominance_depth(pop, space, self.relation)[1]


@dataclass(frozen=True)
class Spea2:
    relation: DominanceRelation = field(default_factory=Pareto)

    def assign(self, pop, space, archive_members=()):
        assign_spea2_fitness(pop, space, archive_members, self.relation)
        return None


@dataclass(frozen=True)
class IndicatorBased:
    indicator: BinaryIndicator = field(default_factory=AdditiveEpsilon)
    kappa: float = 0.05

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    def assign(self, pop, space, archive_members=()):
        assign_indicator_fitness(pop, space, self.indicator, self.kappa)
        return None


FitnessStrategy = Union[DummyFitness, AchievementScalarizing, DominanceRank, DominanceCount,
                        DominanceDepth, Spea2, IndicatorBased]
