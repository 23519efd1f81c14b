"""Parent selection schemes and survivor replacement schemes.

Individuals are ranked by the key ``(fitness, diversity, -index)``: higher
fitness first, diversity breaks ties, and the lower position in the source
list wins remaining ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .solution import Individual

__all__ = [
    "comparison_key",
    "RandomSelection",
    "DeterministicTournament",
    "StochasticTournament",
    "ElitistSelection",
    "SelectionScheme",
    "select",
    "select_many",
    "Generational",
    "OneShotElitist",
    "IterativeElitist",
    "ReplacementScheme",
    "replace",
    "worst_index",
]


def comparison_key(ind: Individual, index: int) -> tuple[float, float, int]:
    if not ind.valid:
        raise ValueError(f"member {index} is not evaluated; its scores cannot be read")
    if ind.fitness is None or ind.diversity is None:
        raise ValueError(f"member {index} has no fitness/diversity assigned")
    return (ind.fitness, ind.diversity, -index)


def _best(members: Sequence[Individual], indices) -> int:
    return max(indices, key=lambda i: comparison_key(members[i], i))


def worst_index(members: Sequence[Individual]) -> int:
    return min(range(len(members)), key=lambda i: comparison_key(members[i], i))


@dataclass(frozen=True)
class RandomSelection:
    def select(self, pop, rng, archive=None) -> Individual:
        return pop[int(rng.integers(len(pop)))]


@dataclass(frozen=True)
class DeterministicTournament:
    """Best of ``size`` members drawn uniformly with replacement."""

    size: int = 2

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"tournament size must be >= 2, got {self.size}")

    def select(self, pop, rng, archive=None) -> Individual:
        entrants = rng.integers(len(pop), size=self.size).tolist()
        return pop[_best(pop, entrants)]


@dataclass(frozen=True)
class StochasticTournament:
    """Binary tournament returning the better entrant with probability ``p``."""

    p: float = 1.0

    def __post_init__(self):
        if not 0.5 <= self.p <= 1.0:
            raise ValueError(f"stochastic tournament probability must lie in [0.5, 1], got {self.p}")

    def select(self, pop, rng, archive=None) -> Individual:
        i, j = rng.integers(len(pop), size=2).tolist()
        better = _best(pop, (i, j))
        worse = j if better == i else i
        return pop[better] if rng.random() < self.p else pop[worse]


@dataclass(frozen=True)
class ElitistSelection:
    """Draw from the archive with probability ``p_archive``, otherwise from the population.

    An empty archive falls back to the population.
    """

    p_archive: float = 1.0
    archive_scheme: "SelectionScheme" = DeterministicTournament(2)
    population_scheme: "SelectionScheme" = DeterministicTournament(2)

    def __post_init__(self):
        if not 0.0 <= self.p_archive <= 1.0:
            raise ValueError(f"p_archive must lie in [0, 1], got {self.p_archive}")
        if isinstance(self.archive_scheme, ElitistSelection) or isinstance(
                self.population_scheme, ElitistSelection):
            raise ValueError("elitist selection cannot nest another elitist selection")

    def select(self, pop, rng, archive=None) -> Individual:
        if archive is None:
            raise ValueError("elitist selection needs an archive")
        members = archive.members if hasattr(archive, "members") else archive
        if members and rng.random() < self.p_archive:
            return self.archive_scheme.select(members, rng)
        return self.population_scheme.select(pop, rng)


SelectionScheme = Union[RandomSelection, DeterministicTournament, StochasticTournament, ElitistSelection]


def select(pop: Sequence[Individual], scheme: SelectionScheme, rng: np.random.Generator,
           archive=None) -> Individual:
    if not pop:
        raise ValueError("cannot select from an empty population")
    return scheme.select(pop, rng, archive)


def select_many(pop, scheme: SelectionScheme, n: int, rng: np.random.Generator,
                archive=None) -> list[Individual]:
    return [select(pop, scheme, rng, archive) for _ in range(n)]


# --------------------------------------------------------------------------
# Replacement
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Generational:
    pass


@dataclass(frozen=True)
class OneShotElitist:
    pass


@dataclass(frozen=True)
class IterativeElitist:
    pass


ReplacementScheme = Union[Generational, OneShotElitist, IterativeElitist]

Refit = Callable[[list], None]


def replace(parents: Sequence[Individual], offspring: Sequence[Individual], scheme: ReplacementScheme,
            n: int, refit: Optional[Refit] = None) -> list[Individual]:
    """Choose the ``n`` survivors of a generation.

    ``refit`` re-assigns fitness and diversity on a list of individuals in
    place.  One-shot elitism scores the union once and keeps the ``n`` best;
    iterative elitism deletes the worst member and re-scores the survivors
    until ``n`` remain.
    """
    if isinstance(scheme, Generational):
        if n != len(offspring):
            raise ValueError(f"generational replacement keeps all {len(offspring)} offspring, asked for {n}")
        return list(offspring)
    union = list(parents) + list(offspring)
    if not 1 <= n <= len(union):
        raise ValueError(f"cannot keep {n} survivors out of {len(union)}")
    if refit is None:
        raise ValueError("elitist replacement needs a refit procedure")
    if isinstance(scheme, OneShotElitist):
        refit(union)
        order = sorted(range(len(union)), key=lambda i: comparison_key(union[i], i), reverse=True)
        keep = sorted(order[:n])
        return [union[i] for i in keep]
    if isinstance(scheme, IterativeElitist):
        refit(union)
        while len(union) > n:
            del union[worst_index(union)]
            refit(union)
        return union
    raise TypeError(f"unknown replacement scheme {scheme!r}")
