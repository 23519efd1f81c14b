"""Archives of nondominated solutions: unbounded, bounded and fixed-size."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from .diversity import Crowding, DiversityStrategy, knn_distances
from .dominance import DominanceRelation, ObjectiveSpace, Pareto, outcomes_against
from .fitness import objective_matrix, spea2_scores
from .selection import worst_index
from .solution import Genotype, Individual

__all__ = [
    "Unbounded",
    "Bounded",
    "FixedSize",
    "ArchiveKind",
    "ArchiveSpec",
    "Archive",
    "ArchiveEntry",
    "archive_update",
    "archive_contents",
]


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Bounded:
    capacity: int
    truncation: DiversityStrategy = field(default_factory=Crowding)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"archive capacity must be >= 1, got {self.capacity}")


@dataclass(frozen=True)
class FixedSize:
    """SPEA2-style archive holding exactly ``capacity`` members once enough were offered."""

    capacity: int

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"archive capacity must be >= 1, got {self.capacity}")


ArchiveKind = Union[Unbounded, Bounded, FixedSize]


@dataclass(frozen=True)
class ArchiveSpec:
    kind: ArchiveKind = field(default_factory=Unbounded)
    relation: DominanceRelation = field(default_factory=Pareto)

    def build(self, space: ObjectiveSpace) -> "Archive":
        return Archive(space, self.kind, self.relation)


class ArchiveEntry(NamedTuple):
    objectives: tuple[float, ...]
    genotype: Genotype


class Archive:
    """A population kept up to date with a dominance relation.

    Members are private copies of the offered individuals, so later changes
    to the population's scores never leak into the archive.
    """

    def __init__(self, space: ObjectiveSpace, kind: ArchiveKind = Unbounded(),
                 relation: DominanceRelation = Pareto()):
        relation.validate(space)
        self.space = space
        self.kind = kind
        self.relation = relation
        self.members: list[Individual] = []
        self._F = np.zeros((0, space.n_objectives))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def objectives(self) -> np.ndarray:
        """Member objective vectors in the original (not sign-normalised) space."""
        if not self.members:
            return np.zeros((0, self.space.n_objectives))
        return np.stack([m.objectives for m in self.members])

    def update(self, candidates: Sequence[Individual]) -> int:
        """Offer ``candidates`` in order and return how many were accepted."""
        F_new = objective_matrix(candidates, self.space)
        if isinstance(self.kind, FixedSize):
            return self._update_fixed(candidates, F_new)
        accepted = 0
        for ind, f in zip(candidates, F_new):
            if self._insert(ind, f):
                accepted += 1
        if isinstance(self.kind, Bounded):
            self._truncate_bounded()
        if accepted:
            self._score_members()
        return accepted

    def _score_members(self) -> None:
        # archive members stay selectable by the elitist scheme
        strategy = self.kind.truncation if isinstance(self.kind, Bounded) else Crowding()
        for m in self.members:
            m.fitness = 0.0
        if len(self.members) >= 2:
            strategy.assign(self.members, self.space)
        else:
            for m in self.members:
                m.diversity = 0.0

    def _insert(self, ind: Individual, f_min: np.ndarray) -> bool:
        if self.members:
            beats, beaten_by, equivalent = outcomes_against(f_min, self._F, self.relation, self.space)
            if beaten_by.any() or equivalent.any():
                return False
            if beats.any():
                keep = ~beats
                self.members = [m for m, k in zip(self.members, keep) if k]
                self._F = self._F[keep]
        self.members.append(ind.copy())
        self._F = np.vstack([self._F, f_min[None, :]])
        return True

    def _truncate_bounded(self) -> None:
        while len(self.members) > self.kind.capacity:
            self.kind.truncation.assign(self.members, self.space)
            for m in self.members:
                m.fitness = 0.0
            drop = worst_index(self.members)
            del self.members[drop]
            self._F = np.delete(self._F, drop, axis=0)

    def _update_fixed(self, candidates: Sequence[Individual], F_new: np.ndarray) -> int:
        before = {id(m) for m in self.members}
        union = self.members + [c.copy() for c in candidates]
        F = np.vstack([self._F, F_new])
        raw, density = spea2_scores(F, self.relation, self.space)
        nondominated = np.flatnonzero(raw == 0).tolist()
        capacity = self.kind.capacity
        if len(nondominated) > capacity:
            chosen = _truncate_by_neighbours(F, nondominated, capacity)
        else:
            fitness = raw + density
            dominated = sorted((i for i in range(len(union)) if raw[i] > 0),
                               key=lambda i: (fitness[i], i))
            chosen = sorted(nondominated + dominated[: capacity - len(nondominated)])
        self.members = [union[i] for i in chosen]
        self._F = F[chosen]
        for i, m in zip(chosen, self.members):
            m.fitness = -float(raw[i] + density[i])
        if len(self.members) >= 2:
            for m, d in zip(self.members, knn_distances(self._F)):
                m.diversity = float(d)
        else:
            for m in self.members:
                m.diversity = 0.0
        return sum(1 for m in self.members if id(m) not in before)

    def snapshot(self) -> list[ArchiveEntry]:
        return archive_contents(self)


def _truncate_by_neighbours(F: np.ndarray, indices: list[int], capacity: int) -> list[int]:
    """SPEA2 truncation: repeatedly drop the member whose sorted neighbour distances are smallest."""
    keep = list(indices)
    dist = cdist(F[keep], F[keep])
    np.fill_diagonal(dist, np.inf)
    alive = list(range(len(keep)))
    while len(alive) > capacity:
        sub = dist[np.ix_(alive, alive)]
        profiles = np.sort(sub, axis=1)
        # lexicographic minimum over k = 1, 2, ...; lower position wins full ties
        order = np.lexsort(profiles.T[::-1])
        del alive[int(order[0])]
    return sorted(keep[a] for a in alive)


def archive_update(archive: Archive, candidates: Sequence[Individual]) -> tuple[Archive, int]:
    accepted = archive.update(candidates)
    return archive, accepted


def archive_contents(archive: Archive) -> list[ArchiveEntry]:
    """Value snapshot of the archive in member order."""
    return [ArchiveEntry(tuple(float(v) for v in m.objectives), m.genotype) for m in archive.members]
