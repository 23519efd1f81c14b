"""NSGA-II, SPEA2 and IBEA as plain compositions of components."""

from __future__ import annotations

from typing import Any, Optional

from .archive import ArchiveSpec, FixedSize
from .diversity import AUTO, Crowding, DummyDiversity, NearestNeighbor
from .dominance import Pareto
from .engine import RunConfig, StoppingCriterion
from .fitness import AdditiveEpsilon, DominanceDepth, IndicatorBased, Spea2
from .selection import DeterministicTournament, ElitistSelection, Generational, IterativeElitist
from .solution import VariationPipeline

__all__ = ["PRESETS", "build_preset"]

PRESETS = ("nsga2", "spea2", "ibea")

_PARAMS = {
    "nsga2": set(),
    "spea2": {"archive_size"},
    "ibea": {"kappa", "indicator"},
}


def build_preset(name: str, problem: Any, population_size: int, budget: StoppingCriterion, *,
                 seed: int = 0, variation: Optional[VariationPipeline] = None, hooks: tuple = (),
                 **params) -> RunConfig:
    """Return the :class:`RunConfig` of a named algorithm.

    Preset-specific keyword parameters: ``archive_size`` for SPEA2 (defaults
    to the population size); ``kappa`` (0.05) and ``indicator``
    (additive epsilon) for IBEA.
    """
    key = str(name).lower().replace("-", "")
    if key not in _PARAMS:
        raise ValueError(f"unknown algorithm preset {name!r}; choose one of {', '.join(PRESETS)}")
    unknown = set(params) - _PARAMS[key]
    if unknown:
        raise ValueError(f"unexpected parameter(s) for {key}: {', '.join(sorted(unknown))}")
    common = dict(problem=problem, population_size=population_size, stopping=budget,
                  variation=variation, hooks=tuple(hooks), seed=seed)
    tournament = DeterministicTournament(2)
    if key == "nsga2":
        return RunConfig(selection=tournament, fitness=DominanceDepth(Pareto()), diversity=Crowding(),
                         replacement=IterativeElitist(), archive=None, **common)
    if key == "spea2":
        capacity = params.get("archive_size", population_size)
        return RunConfig(
            selection=ElitistSelection(1.0, tournament, tournament),
            fitness=Spea2(Pareto()),
            diversity=NearestNeighbor(AUTO),
            replacement=Generational(),
            archive=ArchiveSpec(FixedSize(capacity), Pareto()),
            **common,
        )
    indicator = params.get("indicator", AdditiveEpsilon())
    kappa = params.get("kappa", 0.05)
    return RunConfig(selection=tournament, fitness=IndicatorBased(indicator, kappa),
                     diversity=DummyDiversity(), replacement=IterativeElitist(), archive=None, **common)
