"""Flat ``key = value`` experiment files and their translation into a :class:`RunConfig`.

Blank lines and lines starting with ``#`` are ignored.  Values are stored in
a canonical text form, so ``parse(serialize(c)) == c`` for any parsed ``c``.
See the README for the list of keys.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from .archive import ArchiveSpec, Bounded, FixedSize, Unbounded
from .diversity import AUTO, Crowding, DummyDiversity, NearestNeighbor, Sharing
from .dominance import Epsilon, GDominance, Pareto, Strict, Weak
from .engine import (ArchiveDeltaMetric, ArchiveUpdater, Combined, FrontSnapshotWriter, IndicatorProgress,
                     MaxEvaluations, MaxGenerations, MaxWallTime, RunConfig)
from .fitness import (AdditiveEpsilon, DominanceCount, DominanceDepth, DominanceRank, DummyFitness,
                      HypervolumeDifference, IndicatorBased, Spea2)
from .presets import PRESETS, build_preset
from .problems import DTLZ2, ZDT, Knapsack, load_knapsack_instance, random_knapsack_instance
from .selection import (DeterministicTournament, ElitistSelection, Generational, IterativeElitist,
                        OneShotElitist, RandomSelection, StochasticTournament)

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "load_config", "EXTERNAL_ARCHIVE"]

EXTERNAL_ARCHIVE = "external"


class ConfigError(ValueError):
    """Invalid experiment configuration; ``key`` names the offending entry."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


# --------------------------------------------------------------------------
# Value canonicalisation
# --------------------------------------------------------------------------


def _int(lo: int = 0) -> Callable[[str], str]:
    def conv(s: str) -> str:
        v = int(s)
        if v < lo:
            raise ValueError(f"must be an integer >= {lo}")
        return str(v)
    return conv


def _float(positive: bool = True) -> Callable[[str], str]:
    def conv(s: str) -> str:
        v = float(s)
        if not math.isfinite(v) or (positive and v <= 0):
            raise ValueError("must be a positive finite number" if positive else "must be finite")
        return repr(v)
    return conv


def _prob(s: str) -> str:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise ValueError("must lie in [0, 1]")
    return repr(v)


def _floats(s: str) -> str:
    parts = [p for p in s.replace(",", " ").split()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    values = [float(p) for p in parts]
    if not all(math.isfinite(v) for v in values):
        raise ValueError("values must be finite")
    return ",".join(repr(v) for v in values)


def _choice(*options: str) -> Callable[[str], str]:
    def conv(s: str) -> str:
        v = s.strip().lower()
        if v not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return v
    return conv


def _k(s: str) -> str:
    return AUTO if s.strip().lower() == AUTO else _int(1)(s)


def _text(s: str) -> str:
    if not s:
        raise ValueError("must not be empty")
    return s


def _algorithm(s: str) -> str:
    v = s.strip().lower()
    if v not in PRESETS + ("custom",):
        raise ValueError(f"unknown algorithm {s!r}; choose one of {', '.join(PRESETS + ('custom',))}")
    return v


_ARCHIVES = ("none", "unbounded", "bounded", "fixed")

# key -> converter; insertion order is the serialization order
_SCHEMA: dict[str, Callable[[str], str]] = {
    "algorithm": _algorithm,
    "problem": _choice("zdt1", "zdt2", "dtlz2", "knapsack"),
    "problem.d": _int(2),
    "problem.n_obj": _int(2),
    "problem.k": _int(1),
    "problem.instance": _text,
    "problem.items": _int(1),
    "problem.instance_seed": _int(0),
    "population_size": _int(2),
    "seed": _int(0),
    "max_generations": _int(0),
    "max_evaluations": _int(0),
    "max_wall_time": _float(),
    "variation.crossover_rate": _prob,
    "variation.mutation_rate": _prob,
    "spea2.archive_size": _int(1),
    "ibea.kappa": _float(),
    "ibea.indicator": _choice("eps+", "hvd"),
    "ibea.hvd_ref": _floats,
    "fitness": _choice("depth", "rank", "count", "spea2", "indicator", "dummy"),
    "fitness.kappa": _float(),
    "fitness.indicator": _choice("eps+", "hvd"),
    "fitness.hvd_ref": _floats,
    "diversity": _choice("crowding", "sharing", "knn", "none"),
    "diversity.sigma_share": _float(),
    "diversity.alpha": _float(),
    "diversity.k": _k,
    "selection": _choice("tournament", "stochastic", "random", "elitist"),
    "selection.size": _int(1),
    "selection.p": _prob,
    "selection.p_archive": _prob,
    "replacement": _choice("generational", "one_shot", "iterative"),
    "relation": _choice("pareto", "weak", "strict", "epsilon", "g"),
    "relation.epsilon": _floats,
    "relation.reference": _floats,
    "archive": _choice(*_ARCHIVES),
    "archive.capacity": _int(1),
    "external_archive": _choice(*_ARCHIVES),
    "external_archive.capacity": _int(1),
    "progress.indicator": _choice("none", "hypervolume", "size"),
    "progress.ref": _floats,
    "progress.source": _text,
    "delta.indicator": _choice("none", "eps+", "epsx", "hvd", "contribution"),
    "delta.ref": _floats,
    "delta.source": _text,
    "snapshot.every": _int(0),
    "snapshot.source": _text,
    "output_dir": _text,
}

_PRESET_KEYS = {"spea2": {"spea2.archive_size"}, "ibea": {"ibea.kappa", "ibea.indicator", "ibea.hvd_ref"}}
_CUSTOM_KEYS = {k for k in _SCHEMA if k.split(".")[0] in
                ("fitness", "diversity", "selection", "replacement", "relation", "archive")}

_DEFAULTS = {
    "problem": "zdt1",
    "population_size": "100",
    "seed": "0",
    "external_archive": "none",
    "progress.indicator": "none",
    "delta.indicator": "none",
    "snapshot.every": "0",
    "output_dir": "out",
}

_CUSTOM_DEFAULTS = {
    "fitness": "depth",
    "diversity": "crowding",
    "selection": "tournament",
    "replacement": "iterative",
    "relation": "pareto",
    "archive": "none",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Canonical key/value view of one experiment file."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> str:
        return self.values[key]

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def with_values(self, **updates) -> "ExperimentConfig":
        merged = dict(self.values)
        for key, value in updates.items():
            key = key.replace("__", ".")
            merged[key] = _canonical(key, str(value))
        return ExperimentConfig(_ordered(merged))

    def serialize(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.values.items())

    def resolved(self) -> "ExperimentConfig":
        """Fill in every default the run would use, then check consistency."""
        v = dict(self.values)
        if "algorithm" not in v:
            raise ConfigError("missing required key", "algorithm")
        for key, value in _DEFAULTS.items():
            v.setdefault(key, value)
        problem = v["problem"]
        if problem in ("zdt1", "zdt2"):
            v.setdefault("problem.d", "30")
        elif problem == "dtlz2":
            v.setdefault("problem.n_obj", "3")
            v.setdefault("problem.k", "10")
        elif "problem.instance" not in v:
            v.setdefault("problem.items", "50")
            v.setdefault("problem.instance_seed", "0")
        if not any(k in v for k in ("max_generations", "max_evaluations", "max_wall_time")):
            v["max_generations"] = "100"
        algorithm = v["algorithm"]
        if algorithm == "spea2":
            v.setdefault("spea2.archive_size", v["population_size"])
        elif algorithm == "ibea":
            v.setdefault("ibea.kappa", "0.05")
            v.setdefault("ibea.indicator", "eps+")
        elif algorithm == "custom":
            for key, value in _CUSTOM_DEFAULTS.items():
                v.setdefault(key, value)
            if v["fitness"] == "indicator":
                v.setdefault("fitness.kappa", "0.05")
                v.setdefault("fitness.indicator", "eps+")
            if v["selection"] in ("tournament", "elitist"):
                v.setdefault("selection.size", "2")
            if v["selection"] == "stochastic":
                v.setdefault("selection.p", "0.75")
            if v["selection"] == "elitist":
                v.setdefault("selection.p_archive", "1.0")
            if v["diversity"] == "knn":
                v.setdefault("diversity.k", AUTO)
            if v["diversity"] == "sharing":
                v.setdefault("diversity.alpha", "1.0")
        if v["progress.indicator"] != "none":
            v.setdefault("progress.source", _default_source(v))
        if v["delta.indicator"] != "none":
            v.setdefault("delta.source", _default_source(v))
        if v["snapshot.every"] != "0":
            v.setdefault("snapshot.source", _default_source(v))
        out = ExperimentConfig(_ordered(v))
        out.check()
        return out

    def check(self) -> None:
        """Reject keys that do not apply to the chosen algorithm or problem."""
        v = self.values
        algorithm = v.get("algorithm")
        for key in v:
            head = key.split(".")[0]
            if key in _CUSTOM_KEYS and algorithm != "custom":
                raise ConfigError("only valid with algorithm = custom", key)
            if head in _PRESET_KEYS and key in _PRESET_KEYS[head] and algorithm != head:
                raise ConfigError(f"only valid with algorithm = {head}", key)
        problem = v.get("problem")
        allowed = {"zdt1": {"problem.d"}, "zdt2": {"problem.d"}, "dtlz2": {"problem.n_obj", "problem.k"},
                   "knapsack": {"problem.instance", "problem.items", "problem.instance_seed"}}[problem]
        for key in v:
            if key.startswith("problem.") and key not in allowed:
                raise ConfigError(f"not a parameter of problem {problem}", key)
        if "problem.instance" in v and ("problem.items" in v or "problem.instance_seed" in v):
            raise ConfigError("give either an instance file or a random instance size", "problem.instance")
        for indicator_key, ref_key in (("ibea.indicator", "ibea.hvd_ref"), ("fitness.indicator", "fitness.hvd_ref"),
                                       ("delta.indicator", "delta.ref")):
            if v.get(indicator_key) == "hvd" and ref_key not in v:
                raise ConfigError("hvd needs a reference point", ref_key)
        if v.get("progress.indicator") == "hypervolume" and "progress.ref" not in v:
            raise ConfigError("hypervolume progress needs a reference point", "progress.ref")
        if v.get("diversity") == "sharing" and "diversity.sigma_share" not in v:
            raise ConfigError("sharing needs a radius", "diversity.sigma_share")
        if v.get("relation") == "epsilon" and "relation.epsilon" not in v:
            raise ConfigError("epsilon dominance needs epsilon", "relation.epsilon")
        if v.get("relation") == "g" and "relation.reference" not in v:
            raise ConfigError("g-dominance needs a reference point", "relation.reference")
        for kind_key in ("archive", "external_archive"):
            if v.get(kind_key) in ("bounded", "fixed") and f"{kind_key}.capacity" not in v:
                raise ConfigError("bounded and fixed archives need a capacity", f"{kind_key}.capacity")
        if v.get("selection") == "elitist" and v.get("archive", "none") == "none":
            raise ConfigError("elitist selection needs archive != none", "selection")
        if ("variation.crossover_rate" in v) != ("variation.mutation_rate" in v):
            missing = "variation.mutation_rate" if "variation.crossover_rate" in v else "variation.crossover_rate"
            raise ConfigError("crossover and mutation rates must be given together", missing)

    # ----------------------------------------------------------------------
    # Building the run
    # ----------------------------------------------------------------------

    def build_problem(self):
        v = self.values
        name = v["problem"]
        if name in ("zdt1", "zdt2"):
            return ZDT(int(name[-1]), int(v["problem.d"]))
        if name == "dtlz2":
            return DTLZ2(int(v["problem.n_obj"]), int(v["problem.k"]))
        if "problem.instance" in v:
            return Knapsack(load_knapsack_instance(v["problem.instance"]))
        return Knapsack(random_knapsack_instance(int(v["problem.items"]), int(v["problem.instance_seed"])))

    def build(self, output_dir: Optional[str] = None) -> RunConfig:
        """Translate a resolved config into a :class:`RunConfig`.

        Raises:
            ConfigError: for invalid combinations, naming the key.
            OSError: if a referenced instance file cannot be read.
        """
        v = self.resolved().values
        out = output_dir if output_dir is not None else v["output_dir"]
        problem = self.build_problem()
        n = int(v["population_size"])
        seed = int(v["seed"])
        stopping = _stopping(v)
        variation = None
        if "variation.crossover_rate" in v:
            base = problem.default_variation()
            variation = type(base)(base.crossover, float(v["variation.crossover_rate"]),
                                   base.mutation, float(v["variation.mutation_rate"]))
        hooks = _hooks(v, out)
        algorithm = v["algorithm"]
        if algorithm == "nsga2":
            return build_preset("nsga2", problem, n, stopping, seed=seed, variation=variation, hooks=hooks)
        if algorithm == "spea2":
            return build_preset("spea2", problem, n, stopping, seed=seed, variation=variation, hooks=hooks,
                                archive_size=int(v["spea2.archive_size"]))
        if algorithm == "ibea":
            indicator = _indicator(v, "ibea", problem.space.n_objectives)
            try:
                return build_preset("ibea", problem, n, stopping, seed=seed, variation=variation, hooks=hooks,
                                    kappa=float(v["ibea.kappa"]), indicator=indicator)
            except ValueError as exc:
                raise ConfigError(str(exc), "ibea.kappa") from exc
        relation = _relation(v)
        fitness = {
            "depth": lambda: DominanceDepth(relation),
            "rank": lambda: DominanceRank(relation),
            "count": lambda: DominanceCount(relation),
            "spea2": lambda: Spea2(relation),
            "indicator": lambda: IndicatorBased(_indicator(v, "fitness", problem.space.n_objectives),
                                                float(v["fitness.kappa"])),
            "dummy": DummyFitness,
        }[v["fitness"]]()
        diversity = {
            "crowding": Crowding,
            "sharing": lambda: Sharing(float(v["diversity.sigma_share"]), float(v["diversity.alpha"])),
            "knn": lambda: NearestNeighbor(v["diversity.k"] if v["diversity.k"] == AUTO else int(v["diversity.k"])),
            "none": DummyDiversity,
        }[v["diversity"]]()
        selection = _selection(v)
        replacement = {"generational": Generational, "one_shot": OneShotElitist,
                       "iterative": IterativeElitist}[v["replacement"]]()
        archive = _archive_spec(v, "archive", relation)
        config = RunConfig(problem=problem, population_size=n, selection=selection, fitness=fitness,
                           diversity=diversity, replacement=replacement, stopping=stopping,
                           variation=variation, archive=archive, hooks=tuple(hooks), seed=seed)
        try:
            config.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return config


def _ordered(values: dict) -> dict:
    return {k: values[k] for k in _SCHEMA if k in values}


def _canonical(key: str, value: str, line: Optional[int] = None) -> str:
    if key not in _SCHEMA:
        raise ConfigError("unknown key", key, line)
    try:
        return _SCHEMA[key](value.strip())
    except ValueError as exc:
        raise ConfigError(str(exc) or f"invalid value {value!r}", key, line) from None


def _default_source(v: dict) -> str:
    if v.get("external_archive", "none") != "none":
        return EXTERNAL_ARCHIVE
    if v.get("algorithm") == "spea2" or v.get("archive", "none") != "none":
        return "archive"
    return "population"


def _vector(v: dict, key: str) -> tuple[float, ...]:
    return tuple(float(x) for x in v[key].split(","))


def _stopping(v: dict):
    criteria = []
    if "max_generations" in v:
        criteria.append(MaxGenerations(int(v["max_generations"])))
    if "max_evaluations" in v:
        criteria.append(MaxEvaluations(int(v["max_evaluations"])))
    if "max_wall_time" in v:
        criteria.append(MaxWallTime(float(v["max_wall_time"])))
    return criteria[0] if len(criteria) == 1 else Combined(tuple(criteria))


def _indicator(v: dict, prefix: str, n_obj: int):
    if v[f"{prefix}.indicator"] == "eps+":
        return AdditiveEpsilon()
    ref = _vector(v, f"{prefix}.hvd_ref")
    if len(ref) != n_obj:
        raise ConfigError(f"expected {n_obj} values", f"{prefix}.hvd_ref")
    return HypervolumeDifference(ref)


def _relation(v: dict):
    name = v["relation"]
    if name == "pareto":
        return Pareto()
    if name == "weak":
        return Weak()
    if name == "strict":
        return Strict()
    if name == "epsilon":
        eps = _vector(v, "relation.epsilon")
        try:
            return Epsilon(eps[0] if len(eps) == 1 else eps)
        except ValueError as exc:
            raise ConfigError(str(exc), "relation.epsilon") from exc
    return GDominance(_vector(v, "relation.reference"))


def _selection(v: dict):
    name = v["selection"]
    try:
        if name == "random":
            return RandomSelection()
        if name == "stochastic":
            return StochasticTournament(float(v["selection.p"]))
        tournament = DeterministicTournament(int(v["selection.size"]))
        if name == "tournament":
            return tournament
        return ElitistSelection(float(v["selection.p_archive"]), tournament, tournament)
    except ValueError as exc:
        raise ConfigError(str(exc), "selection") from exc


def _archive_spec(v: dict, key: str, relation) -> Optional[ArchiveSpec]:
    kind = v.get(key, "none")
    if kind == "none":
        return None
    if kind == "unbounded":
        return ArchiveSpec(Unbounded(), relation)
    capacity = int(v[f"{key}.capacity"])
    return ArchiveSpec(Bounded(capacity) if kind == "bounded" else FixedSize(capacity), relation)


def _hooks(v: dict, output_dir: str) -> list:
    hooks = []
    external = _archive_spec(v, "external_archive", Pareto())
    if external is not None:
        hooks.append(ArchiveUpdater(external, EXTERNAL_ARCHIVE))
    try:
        if v["progress.indicator"] != "none":
            ref = _vector(v, "progress.ref") if "progress.ref" in v else None
            hooks.append(IndicatorProgress(v["progress.indicator"], ref, v["progress.source"],
                                           v["progress.indicator"], int(v["seed"])))
        if v["delta.indicator"] != "none":
            ref = _vector(v, "delta.ref") if "delta.ref" in v else None
            hooks.append(ArchiveDeltaMetric(v["delta.indicator"], ref, v["delta.source"],
                                            f"delta_{v['delta.indicator']}", int(v["seed"])))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    every = int(v["snapshot.every"])
    if every:
        hooks.append(FrontSnapshotWriter(os.path.join(output_dir, "snapshots"), every, v["snapshot.source"]))
    return hooks


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines into a canonical :class:`ExperimentConfig`."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {line!r}", None, lineno)
        if key in values:
            raise ConfigError("duplicate key", key, lineno)
        values[key] = _canonical(key, value, lineno)
    return ExperimentConfig(_ordered(values))


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
