"""Component-based evolutionary multiobjective optimization."""

from .archive import Archive, ArchiveSpec, Bounded, FixedSize, Unbounded, archive_contents, archive_update
from .diversity import (AUTO, Crowding, DummyDiversity, NearestNeighbor, Sharing, assign_crowding,
                        assign_knn_density, assign_sharing)
from .dominance import (Epsilon, GDominance, Lex, ObjectiveSpace, Outcome, Pareto, Sense, Strict, Weak,
                        lexicographic_compare, pareto_compare, relation_compare)
from .engine import (ArchiveDeltaMetric, ArchiveUpdater, Combined, FrontSnapshotWriter, IndicatorProgress,
                     MaxEvaluations, MaxGenerations, MaxWallTime, RunConfig, RunResult, run, should_stop)
from .fitness import (AchievementScalarizing, AdditiveEpsilon, DominanceCount, DominanceDepth, DominanceRank,
                      DummyFitness, HypervolumeDifference, IndicatorBased, Spea2, assign_achievement_scalarizing,
                      assign_dominance_count, assign_dominance_depth, assign_dominance_rank,
                      assign_indicator_fitness, assign_spea2_fitness)
from .indicators import binary_hypervolume, contribution, epsilon_indicator, hypervolume
from .config import ExperimentConfig, load_config, parse_config
from .presets import build_preset
from .problems import DTLZ2, ZDT, Knapsack, KnapsackInstance, load_knapsack_instance
from .selection import (DeterministicTournament, ElitistSelection, Generational, IterativeElitist,
                        OneShotElitist, RandomSelection, StochasticTournament, replace, select)
from .solution import (BitVector, Individual, Permutation, RealVector, VariationPipeline, apply_variation,
                       evaluate, initialize_population)

__version__ = "0.1.0"

__all__ = [
    "AUTO",
    "AchievementScalarizing",
    "AdditiveEpsilon",
    "Archive",
    "ArchiveDeltaMetric",
    "ArchiveSpec",
    "ArchiveUpdater",
    "BitVector",
    "Bounded",
    "Combined",
    "Crowding",
    "DTLZ2",
    "DeterministicTournament",
    "DominanceCount",
    "DominanceDepth",
    "DominanceRank",
    "DummyDiversity",
    "DummyFitness",
    "ElitistSelection",
    "Epsilon",
    "ExperimentConfig",
    "FixedSize",
    "FrontSnapshotWriter",
    "GDominance",
    "Generational",
    "HypervolumeDifference",
    "IndicatorBased",
    "IndicatorProgress",
    "Individual",
    "IterativeElitist",
    "Knapsack",
    "KnapsackInstance",
    "Lex",
    "MaxEvaluations",
    "MaxGenerations",
    "MaxWallTime",
    "NearestNeighbor",
    "ObjectiveSpace",
    "OneShotElitist",
    "Outcome",
    "Pareto",
    "Permutation",
    "RandomSelection",
    "RealVector",
    "RunConfig",
    "RunResult",
    "Sense",
    "Sharing",
    "Spea2",
    "StochasticTournament",
    "Strict",
    "Unbounded",
    "VariationPipeline",
    "Weak",
    "ZDT",
    "apply_variation",
    "archive_contents",
    "archive_update",
    "assign_achievement_scalarizing",
    "assign_crowding",
    "assign_dominance_count",
    "assign_dominance_depth",
    "assign_dominance_rank",
    "assign_indicator_fitness",
    "assign_knn_density",
    "assign_sharing",
    "assign_spea2_fitness",
    "binary_hypervolume",
    "build_preset",
    "contribution",
    "epsilon_indicator",
    "evaluate",
    "hypervolume",
    "initialize_population",
    "lexicographic_compare",
    "load_config",
    "load_knapsack_instance",
    "pareto_compare",
    "parse_config",
    "relation_compare",
    "replace",
    "run",
    "select",
    "should_stop",
]
