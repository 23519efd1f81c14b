"""The generic evolutionary loop, stopping criteria and checkpoint hooks."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from .archive import Archive, ArchiveEntry, ArchiveSpec, archive_contents
from .diversity import Crowding, DiversityStrategy, DummyDiversity, assign_crowding
from .dominance import ObjectiveSpace, dominance_matrix, nondominated_mask
from .fitness import DominanceDepth, FitnessStrategy, fast_nondominated_sort, objective_matrix
from .frontfile import dumps_front, format_value, write_front
from .indicators import binary_hypervolume, contribution, epsilon_indicator, hypervolume
from .selection import (ElitistSelection, Generational, ReplacementScheme, SelectionScheme,
                        replace, select_many)
from .solution import VariationPipeline, apply_variation, evaluate, initialize_population

__all__ = [
    "MaxGenerations",
    "MaxEvaluations",
    "MaxWallTime",
    "Combined",
    "StoppingCriterion",
    "should_stop",
    "ArchiveUpdater",
    "FrontSnapshotWriter",
    "IndicatorProgress",
    "ArchiveDeltaMetric",
    "Hook",
    "RunConfig",
    "EngineState",
    "RunResult",
    "RunError",
    "checkpoint_tick",
    "run",
]

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Stopping criteria
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MaxGenerations:
    generations: int

    def __post_init__(self):
        if self.generations < 0:
            raise ValueError("generation budget must be >= 0")


@dataclass(frozen=True)
class MaxEvaluations:
    evaluations: int

    def __post_init__(self):
        if self.evaluations < 0:
            raise ValueError("evaluation budget must be >= 0")


@dataclass(frozen=True)
class MaxWallTime:
    seconds: float

    def __post_init__(self):
        if not self.seconds > 0:
            raise ValueError("wall-time budget must be positive")


@dataclass(frozen=True)
class Combined:
    criteria: tuple

    def __post_init__(self):
        object.__setattr__(self, "criteria", tuple(self.criteria))
        if not self.criteria:
            raise ValueError("Combined needs at least one criterion")


StoppingCriterion = Union[MaxGenerations, MaxEvaluations, MaxWallTime, Combined]


def should_stop(state: "EngineState", crit: StoppingCriterion) -> bool:
    """True once ``crit`` is met (any member, for ``Combined``)."""
    if isinstance(crit, MaxGenerations):
        return state.generation >= crit.generations
    if isinstance(crit, MaxEvaluations):
        return state.evaluations >= crit.evaluations
    if isinstance(crit, MaxWallTime):
        return time.perf_counter() - state.start_time >= crit.seconds
    if isinstance(crit, Combined):
        return any(should_stop(state, c) for c in crit.criteria)
    raise TypeError(f"unknown stopping criterion {crit!r}")


# --------------------------------------------------------------------------
# Hooks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ArchiveUpdater:
    """Offer the whole population to a named archive at every tick."""

    spec: ArchiveSpec = field(default_factory=ArchiveSpec)
    name: str = "external"

    def start(self, state: "EngineState") -> None:
        state.archives[self.name] = self.spec.build(state.space)

    def __call__(self, state: "EngineState") -> None:
        state.archives[self.name].update(state.population)


@dataclass(frozen=True)
class FrontSnapshotWriter:
    """Write ``<directory>/front-<generation>.front`` every ``every`` generations."""

    directory: str
    every: int = 1
    source: str = "population"

    def __post_init__(self):
        if self.every < 1:
            raise ValueError("snapshot period must be >= 1")

    def start(self, state: "EngineState") -> None:
        os.makedirs(self.directory, exist_ok=True)

    def __call__(self, state: "EngineState") -> None:
        if state.generation % self.every == 0:
            path = os.path.join(self.directory, f"front-{state.generation:06d}.front")
            write_front(path, state.front(self.source), state.space)


@dataclass(frozen=True)
class IndicatorProgress:
    """Append one unary indicator value per tick to ``state.series[name]``.

    ``indicator`` is ``"hypervolume"`` (needs ``ref``), ``"size"``, or a
    callable taking the front array.
    """

    indicator: Union[str, Callable[[np.ndarray], float]] = "hypervolume"
    ref: Optional[tuple[float, ...]] = None
    source: str = "population"
    name: str = "hypervolume"
    seed: int = 0

    def __post_init__(self):
        if self.indicator == "hypervolume" and self.ref is None:
            raise ValueError("hypervolume progress needs a reference point")

    def start(self, state: "EngineState") -> None:
        state.series[self.name] = []

    def value(self, front: np.ndarray, space: ObjectiveSpace) -> float:
        if callable(self.indicator):
            return float(self.indicator(front))
        if self.indicator == "hypervolume":
            return float(hypervolume(front, self.ref, space, seed=self.seed))
        if self.indicator == "size":
            return float(len(front))
        raise ValueError(f"unknown unary indicator {self.indicator!r}")

    def __call__(self, state: "EngineState") -> None:
        state.series[self.name].append(self.value(state.front(self.source), state.space))


def _binary(indicator: str, a: np.ndarray, b: np.ndarray, space: ObjectiveSpace, ref, seed: int) -> float:
    if indicator == "eps+":
        return epsilon_indicator(a, b, "additive", space)
    if indicator == "epsx":
        return epsilon_indicator(a, b, "multiplicative", space)
    if indicator == "hvd":
        return binary_hypervolume(a, b, ref, space, seed=seed)
    if indicator == "contribution":
        return contribution(a, b, space)
    raise ValueError(f"unknown binary indicator {indicator!r}")


@dataclass(frozen=True)
class ArchiveDeltaMetric:
    """Binary indicator of the current front against the previous tick's front.

    The first tick has no predecessor and records NaN.
    """

    indicator: str = "eps+"
    ref: Optional[tuple[float, ...]] = None
    source: str = "population"
    name: str = "delta"
    seed: int = 0

    def __post_init__(self):
        if self.indicator not in ("eps+", "epsx", "hvd", "contribution"):
            raise ValueError(f"unknown binary indicator {self.indicator!r}")
        if self.indicator == "hvd" and self.ref is None:
            raise ValueError("hvd needs a reference point")

    def start(self, state: "EngineState") -> None:
        state.series[self.name] = []
        state.scratch[self.name] = None

    def __call__(self, state: "EngineState") -> None:
        current = state.front(self.source)
        previous = state.scratch[self.name]
        if previous is None or len(previous) == 0 or len(current) == 0:
            value = float("nan")
        else:
            value = _binary(self.indicator, current, previous, state.space, self.ref, self.seed)
        state.series[self.name].append(value)
        state.scratch[self.name] = current


Hook = Union[ArchiveUpdater, FrontSnapshotWriter, IndicatorProgress, ArchiveDeltaMetric]


# --------------------------------------------------------------------------
# Configuration, state, result
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    problem: Any
    population_size: int
    selection: SelectionScheme
    fitness: FitnessStrategy
    diversity: DiversityStrategy
    replacement: ReplacementScheme
    stopping: StoppingCriterion
    variation: Optional[VariationPipeline] = None
    archive: Optional[ArchiveSpec] = None
    hooks: tuple = ()
    seed: int = 0

    def pipeline(self) -> VariationPipeline:
        return self.variation if self.variation is not None else self.problem.default_variation()

    def validate(self) -> None:
        if self.population_size < 2:
            raise ValueError(f"population size must be >= 2, got {self.population_size}")
        space = self.problem.space
        kind = self.problem.random_genotype(np.random.default_rng(0)).kind
        self.pipeline().check_kind(kind)
        for strategy in (self.fitness,):
            rel = getattr(strategy, "relation", None)
            if rel is not None:
                rel.validate(space)
        if self.archive is not None:
            self.archive.relation.validate(space)
        if isinstance(self.selection, ElitistSelection) and self.archive is None:
            raise ValueError("elitist selection requires an archive in the run configuration")
        names = [h.name for h in self.hooks if hasattr(h, "name")]
        if len(names) != len(set(names)):
            raise ValueError(f"hook names must be unique, got {names}")


@dataclass
class EngineState:
    space: ObjectiveSpace
    population: list
    rng: np.random.Generator
    archive: Optional[Archive] = None
    generation: int = 0
    evaluations: int = 0
    start_time: float = field(default_factory=time.perf_counter)
    archives: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    scratch: dict = field(default_factory=dict)
    hook_errors: list = field(default_factory=list)

    def front(self, source: str = "population") -> np.ndarray:
        """Objective vectors of the named approximation set (original senses)."""
        if source == "population":
            F = objective_matrix(self.population, self.space)
            mask = nondominated_mask(F)
            return np.stack([ind.objectives for ind in self.population])[mask]
        if source == "archive":
            if self.archive is None:
                raise ValueError("run has no archive configured")
            return self.archive.objectives()
        if source in self.archives:
            return self.archives[source].objectives()
        raise ValueError(f"unknown front source {source!r}")


class RunError(RuntimeError):
    def __init__(self, message: str, generation: int, evaluations: int):
        super().__init__(f"generation {generation}, evaluations {evaluations}: {message}")
        self.generation = generation
        self.evaluations = evaluations


@dataclass
class RunResult:
    population: list
    front: np.ndarray
    space: ObjectiveSpace
    generations: int
    evaluations: int
    archive: list[ArchiveEntry]
    archives: dict
    series: dict
    history: list

    def progress_tsv(self) -> str:
        names = list(self.series)
        lines = ["\t".join(["generation", "evaluations", *names])]
        for row, (gen, evals) in enumerate(self.history):
            values = [format_value(self.series[n][row]) for n in names]
            lines.append("\t".join([str(gen), str(evals), *values]))
        return "\n".join(lines) + "\n"

    def serialize(self) -> str:
        return dumps_front(self.front, self.space) + self.progress_tsv()


# --------------------------------------------------------------------------
# The loop
# --------------------------------------------------------------------------


def checkpoint_tick(state: EngineState, hooks: Sequence) -> EngineState:
    """Fire hooks in order; a failing hook is logged and the run carries on."""
    if state.archive is not None:
        state.archive.update(state.population)
    for hook in hooks:
        try:
            hook(state)
        except OSError as exc:
            log.warning("hook %r failed at generation %d: %s", hook, state.generation, exc)
            state.hook_errors.append((state.generation, repr(hook), str(exc)))
    return state


class _Scorer:
    """Fitness then diversity re-assignment, as used by replacement.

    Iterative elitism calls this once per deletion.  With dominance-depth
    fitness, deleting a member that dominates nobody leaves every other
    layer untouched, so only that member's layer is re-crowded; the result
    is identical to a full recomputation.
    """

    def __init__(self, config: RunConfig, state: EngineState):
        self.fitness = config.fitness
        self.diversity = config.diversity
        self.state = state
        self._members: list = []
        self._D = None
        self._layer = None

    def __call__(self, members: list) -> None:
        space = self.state.space
        if isinstance(self.fitness, DominanceDepth):
            if not self._shrink(members):
                F = objective_matrix(members, space)
                self._D = dominance_matrix(F, self.fitness.relation, space)
                fronts = fast_nondominated_sort(self._D)
                self._layer = np.empty(len(members), dtype=np.int64)
                for k, front in enumerate(fronts):
                    self._layer[front] = k
                    for i in front:
                        members[i].fitness = -float(k)
                self.diversity.assign(members, space, fronts)
            self._members = list(members)
            return
        archive_members = self.state.archive.members if self.state.archive is not None else ()
        fronts = self.fitness.assign(members, space, archive_members)
        self.diversity.assign(members, space, fronts)

    def _shrink(self, members: list) -> bool:
        prev = self._members
        if self._D is None or len(members) != len(prev) - 1:
            return False
        r = next((i for i, m in enumerate(members) if m is not prev[i]), len(members))
        if any(m is not p for m, p in zip(members[r:], prev[r + 1:])):
            return False
        if self._D[r].any():
            return False
        layer = self._layer[r]
        self._D = np.delete(np.delete(self._D, r, axis=0), r, axis=1)
        self._layer = np.delete(self._layer, r)
        if isinstance(self.diversity, Crowding):
            front = np.flatnonzero(self._layer == layer).tolist()
            if front:
                assign_crowding(members, self.state.space, [front], partial=True)
        elif not isinstance(self.diversity, DummyDiversity):
            fronts = [np.flatnonzero(self._layer == k).tolist() for k in range(int(self._layer.max()) + 1)]
            self.diversity.assign(members, self.state.space, fronts)
        return True


def run(config: RunConfig) -> RunResult:
    """Execute one optimization run described by ``config``."""
    config.validate()
    problem = config.problem
    space = problem.space
    n = config.population_size
    pipeline = config.pipeline()
    rng = np.random.default_rng(config.seed)
    state = EngineState(space=space, population=[], rng=rng)
    if config.archive is not None:
        state.archive = config.archive.build(space)
    for hook in config.hooks:
        hook.start(state)
    refit = _Scorer(config, state)
    history = []

    def step(label: str, fn, *args):
        try:
            return fn(*args)
        except RunError:
            raise
        except Exception as exc:
            raise RunError(f"{label} failed: {exc}", state.generation, state.evaluations) from exc

    state.population = step("initialization", initialize_population, problem.random_genotype, n, rng)
    state.evaluations += step("evaluation", evaluate, state.population, problem.evaluate)
    step("scoring", refit, state.population)
    step("checkpoint", checkpoint_tick, state, config.hooks)
    history.append((state.generation, state.evaluations))

    while not should_stop(state, config.stopping):
        archive = state.archive
        parents = step("selection", select_many, state.population, config.selection, n, rng, archive)
        offspring = step("variation", apply_variation, parents, pipeline, rng)
        state.evaluations += step("evaluation", evaluate, offspring, problem.evaluate)
        if isinstance(config.replacement, Generational):
            survivors = step("replacement", replace, state.population, offspring, config.replacement, n)
            step("scoring", refit, survivors)
        else:
            survivors = step("replacement", replace, state.population, offspring,
                             config.replacement, n, refit)
        state.population = survivors
        state.generation += 1
        step("checkpoint", checkpoint_tick, state, config.hooks)
        history.append((state.generation, state.evaluations))

    if state.archive is not None:
        final = state.archive.objectives()
        entries = archive_contents(state.archive)
    else:
        final = state.front("population")
        entries = []
    return RunResult(
        population=state.population,
        front=final,
        space=space,
        generations=state.generation,
        evaluations=state.evaluations,
        archive=entries,
        archives=state.archives,
        series=state.series,
        history=history,
    )
