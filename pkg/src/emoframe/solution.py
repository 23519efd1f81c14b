"""Genotypes, individuals, initialization, evaluation and variation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Sequence

import numpy as np

__all__ = [
    "RealVector",
    "BitVector",
    "Permutation",
    "Genotype",
    "Individual",
    "Population",
    "EvaluationError",
    "CombinedInit",
    "initialize_population",
    "evaluate",
    "SBX",
    "PolynomialMutation",
    "OnePointCrossover",
    "BitFlip",
    "OrderCrossover",
    "SwapMutation",
    "VariationPipeline",
    "apply_variation",
]


# --------------------------------------------------------------------------
# Genotypes
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RealVector:
    genes: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    kind = "real"

    def __post_init__(self):
        genes = np.array(self.genes, dtype=float)
        lower = np.broadcast_to(np.asarray(self.lower, dtype=float), genes.shape).copy()
        upper = np.broadcast_to(np.asarray(self.upper, dtype=float), genes.shape).copy()
        if np.any(lower > upper):
            raise ValueError("lower bound above upper bound")
        if np.any(genes < lower) or np.any(genes > upper):
            raise ValueError("real genes outside their bounds")
        for arr in (genes, lower, upper):
            arr.setflags(write=False)
        object.__setattr__(self, "genes", genes)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def random(cls, lower, upper, rng: np.random.Generator) -> "RealVector":
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        return cls(rng.uniform(lower, upper), lower, upper)

    def with_genes(self, genes) -> "RealVector":
        return RealVector(np.clip(genes, self.lower, self.upper), self.lower, self.upper)


@dataclass(frozen=True, eq=False)
class BitVector:
    genes: np.ndarray

    kind = "bit"

    def __post_init__(self):
        genes = np.array(self.genes, dtype=bool)
        genes.setflags(write=False)
        object.__setattr__(self, "genes", genes)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "BitVector":
        return cls(rng.random(length) < 0.5)

    def with_genes(self, genes) -> "BitVector":
        return BitVector(genes)


@dataclass(frozen=True, eq=False)
class Permutation:
    genes: np.ndarray

    kind = "permutation"

    def __post_init__(self):
        genes = np.array(self.genes, dtype=np.int64)
        if not np.array_equal(np.sort(genes), np.arange(genes.size)):
            raise ValueError(f"not a permutation of 0..{genes.size - 1}: {genes.tolist()}")
        genes.setflags(write=False)
        object.__setattr__(self, "genes", genes)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(length))

    def with_genes(self, genes) -> "Permutation":
        return Permutation(genes)


Genotype = RealVector | BitVector | Permutation


def _same(a: Genotype, b: Genotype) -> bool:
    return a.genes.shape == b.genes.shape and bool(np.array_equal(a.genes, b.genes))


# --------------------------------------------------------------------------
# Individuals
# --------------------------------------------------------------------------


@dataclass(eq=False)
class Individual:
    """A genotype together with its objective vector and selection scores.

    ``fitness`` and ``diversity`` are both larger-is-better.  ``valid`` tells
    whether ``objectives`` is up to date with ``genotype``.
    """

    genotype: Genotype
    objectives: Optional[np.ndarray] = None
    fitness: Optional[float] = None
    diversity: Optional[float] = None
    valid: bool = False

    def set_objectives(self, values) -> None:
        arr = np.array(values, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError(f"objective vector must be a finite 1-D sequence, got {values!r}")
        arr.setflags(write=False)
        self.objectives = arr
        self.valid = True

    def copy(self) -> "Individual":
        # genotype and objective arrays are read-only, sharing them is safe
        return Individual(self.genotype, self.objectives, self.fitness, self.diversity, self.valid)

    def with_genotype(self, genotype: Genotype) -> "Individual":
        return Individual(genotype)


Population = list  # list[Individual]


class EvaluationError(RuntimeError):
    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"evaluation failed for individual {index}: {cause!r}")
        self.index = index


# --------------------------------------------------------------------------
# Initialization and evaluation
# --------------------------------------------------------------------------


class CombinedInit:
    """Round-robin over several initializers (each ``rng -> Genotype``)."""

    def __init__(self, *initializers: Callable[[np.random.Generator], Genotype]):
        if not initializers:
            raise ValueError("CombinedInit needs at least one initializer")
        self.initializers = initializers
        self._cycle = itertools.cycle(initializers)

    def __call__(self, rng: np.random.Generator) -> Genotype:
        return next(self._cycle)(rng)


def initialize_population(initializer: Callable[[np.random.Generator], Genotype],
                          size: int, rng: np.random.Generator) -> list[Individual]:
    if size < 1:
        raise ValueError(f"population size must be >= 1, got {size}")
    return [Individual(initializer(rng)) for _ in range(size)]


class Evaluator(Protocol):
    def __call__(self, genotype: Genotype) -> Sequence[float]: ...


def evaluate(pop: Sequence[Individual], evaluator: Evaluator) -> int:
    """Evaluate every invalid member in place, in population order.

    Returns:
        The number of evaluator calls performed.
    """
    calls = 0
    for index, ind in enumerate(pop):
        if ind.valid:
            continue
        try:
            values = evaluator(ind.genotype)
        except Exception as exc:
            raise EvaluationError(index, exc) from exc
        ind.set_objectives(values)
        ind.fitness = None
        ind.diversity = None
        calls += 1
    return calls


# --------------------------------------------------------------------------
# Variation operators
# --------------------------------------------------------------------------


def _check_kind(genotype: Genotype, kind: str, op) -> None:
    if genotype.kind != kind:
        raise TypeError(f"{type(op).__name__} expects {kind} genotypes, got {genotype.kind}")


@dataclass(frozen=True)
class SBX:
    """Simulated binary crossover for bounded real vectors."""

    eta: float = 15.0
    gene_rate: float = 0.5

    kind = "real"

    def __call__(self, p1: RealVector, p2: RealVector, rng: np.random.Generator):
        _check_kind(p1, self.kind, self)
        _check_kind(p2, self.kind, self)
        x1, x2 = p1.genes.copy(), p2.genes.copy()
        lo, hi = p1.lower, p1.upper
        c1, c2 = x1.copy(), x2.copy()
        for i in range(x1.size):
            if rng.random() > self.gene_rate or abs(x1[i] - x2[i]) <= 1e-14:
                continue
            y1, y2 = min(x1[i], x2[i]), max(x1[i], x2[i])
            span = y2 - y1
            u = rng.random()

            def spread(beta):
                alpha = 2.0 - beta ** -(self.eta + 1.0)
                if u <= 1.0 / alpha:
                    return (u * alpha) ** (1.0 / (self.eta + 1.0))
                return (1.0 / (2.0 - u * alpha)) ** (1.0 / (self.eta + 1.0))

            beta_lo = 1.0 + 2.0 * (y1 - lo[i]) / span
            beta_hi = 1.0 + 2.0 * (hi[i] - y2) / span
            a = 0.5 * ((y1 + y2) - spread(beta_lo) * span)
            b = 0.5 * ((y1 + y2) + spread(beta_hi) * span)
            a = min(max(a, lo[i]), hi[i])
            b = min(max(b, lo[i]), hi[i])
            if rng.random() < 0.5:
                a, b = b, a
            c1[i], c2[i] = a, b
        return p1.with_genes(c1), p2.with_genes(c2)


@dataclass(frozen=True)
class PolynomialMutation:
    """Bounded polynomial mutation; ``rate=None`` means ``1/L`` per gene."""

    eta: float = 20.0
    rate: Optional[float] = None

    kind = "real"

    def __call__(self, parent: RealVector, rng: np.random.Generator) -> RealVector:
        _check_kind(parent, self.kind, self)
        x = parent.genes.copy()
        lo, hi = parent.lower, parent.upper
        rate = 1.0 / x.size if self.rate is None else self.rate
        power = 1.0 / (self.eta + 1.0)
        for i in range(x.size):
            if rng.random() >= rate or hi[i] <= lo[i]:
                continue
            span = hi[i] - lo[i]
            d1 = (x[i] - lo[i]) / span
            d2 = (hi[i] - x[i]) / span
            u = rng.random()
            if u < 0.5:
                val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (self.eta + 1.0)
                dq = val ** power - 1.0
            else:
                val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (self.eta + 1.0)
                dq = 1.0 - val ** power
            x[i] = x[i] + dq * span
        return parent.with_genes(x)


@dataclass(frozen=True)
class OnePointCrossover:
    """Swap tails after a cut point; ``cut=None`` draws it uniformly in 1..L-1."""

    cut: Optional[int] = None

    kind = "bit"

    def __call__(self, p1: BitVector, p2: BitVector, rng: np.random.Generator):
        _check_kind(p1, self.kind, self)
        _check_kind(p2, self.kind, self)
        n = p1.genes.size
        if n < 2:
            return p1, p2
        cut = self.cut if self.cut is not None else int(rng.integers(1, n))
        c1 = np.concatenate([p1.genes[:cut], p2.genes[cut:]])
        c2 = np.concatenate([p2.genes[:cut], p1.genes[cut:]])
        return p1.with_genes(c1), p2.with_genes(c2)


@dataclass(frozen=True)
class BitFlip:
    """Independent per-gene flips; ``rate=None`` means ``1/L``."""

    rate: Optional[float] = None

    kind = "bit"

    def __call__(self, parent: BitVector, rng: np.random.Generator) -> BitVector:
        _check_kind(parent, self.kind, self)
        n = parent.genes.size
        rate = 1.0 / n if self.rate is None else self.rate
        flips = rng.random(n) < rate
        return parent.with_genes(parent.genes ^ flips)


@dataclass(frozen=True)
class OrderCrossover:
    """OX: keep a slice of one parent, fill the rest in the other parent's order."""

    kind = "permutation"

    def _child(self, keep: np.ndarray, other: np.ndarray, i: int, j: int) -> np.ndarray:
        n = keep.size
        child = np.full(n, -1, dtype=np.int64)
        child[i:j] = keep[i:j]
        taken = set(keep[i:j].tolist())
        fill = [g for g in np.roll(other, -j).tolist() if g not in taken]
        positions = [(j + k) % n for k in range(n - (j - i))]
        child[positions] = fill
        return child

    def __call__(self, p1: Permutation, p2: Permutation, rng: np.random.Generator):
        _check_kind(p1, self.kind, self)
        _check_kind(p2, self.kind, self)
        n = p1.genes.size
        if n < 2:
            return p1, p2
        i, j = sorted(rng.choice(n + 1, size=2, replace=False).tolist())
        return (p1.with_genes(self._child(p1.genes, p2.genes, i, j)),
                p2.with_genes(self._child(p2.genes, p1.genes, i, j)))


@dataclass(frozen=True)
class SwapMutation:
    kind = "permutation"

    def __call__(self, parent: Permutation, rng: np.random.Generator) -> Permutation:
        _check_kind(parent, self.kind, self)
        n = parent.genes.size
        if n < 2:
            return parent
        i, j = rng.choice(n, size=2, replace=False)
        genes = parent.genes.copy()
        genes[i], genes[j] = genes[j], genes[i]
        return parent.with_genes(genes)


@dataclass(frozen=True)
class VariationPipeline:
    crossover: Optional[Callable] = None
    crossover_rate: float = 1.0
    mutation: Optional[Callable] = None
    mutation_rate: float = 1.0

    def __post_init__(self):
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")

    def check_kind(self, kind: str) -> None:
        for op in (self.crossover, self.mutation):
            op_kind = getattr(op, "kind", None)
            if op is not None and op_kind is not None and op_kind != kind:
                raise TypeError(f"{type(op).__name__} cannot vary {kind} genotypes")


def _offspring(parent: Individual, genotype: Genotype) -> Individual:
    if genotype is parent.genotype or _same(genotype, parent.genotype):
        return parent.copy()
    return Individual(genotype)


def apply_variation(parents: Sequence[Individual], pipeline: VariationPipeline,
                    rng: np.random.Generator) -> list[Individual]:
    """Create one offspring per parent.

    Parents are paired (0, 1), (2, 3), ...; each pair is recombined with
    probability ``crossover_rate``; an odd last parent skips crossover.  Each
    child is then mutated with probability ``mutation_rate``.  Children whose
    genotype changed come back invalid with cleared scores, unchanged ones are
    plain copies of their parent.
    """
    if not parents:
        raise ValueError("apply_variation needs at least one parent")
    pipeline.check_kind(parents[0].genotype.kind)
    genotypes = [p.genotype for p in parents]
    if pipeline.crossover is not None:
        for k in range(0, len(genotypes) - 1, 2):
            if rng.random() < pipeline.crossover_rate:
                genotypes[k], genotypes[k + 1] = pipeline.crossover(genotypes[k], genotypes[k + 1], rng)
    if pipeline.mutation is not None:
        for k, g in enumerate(genotypes):
            if rng.random() < pipeline.mutation_rate:
                genotypes[k] = pipeline.mutation(g, rng)
    return [_offspring(p, g) for p, g in zip(parents, genotypes)]
