"""Benchmark problems: ZDT1, ZDT2, DTLZ2 and a bi-objective 0/1 knapsack."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .dominance import ObjectiveSpace
from .solution import (BitFlip, BitVector, OnePointCrossover, PolynomialMutation, RealVector, SBX,
                       VariationPipeline)

__all__ = [
    "ZDT",
    "DTLZ2",
    "KnapsackInstance",
    "Knapsack",
    "InstanceFormatError",
    "zdt_evaluate",
    "dtlz2_evaluate",
    "knapsack_evaluate",
    "knapsack_repair",
    "load_knapsack_instance",
    "random_knapsack_instance",
    "zdt1_front",
]


def _unit_box(x, d: int | None = None) -> np.ndarray:
    x = np.asarray(getattr(x, "genes", x), dtype=float)
    if x.ndim != 1 or (d is not None and x.shape[0] != d):
        raise ValueError(f"expected a decision vector of length {d}, got shape {x.shape}")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("decision vector outside [0, 1]^d")
    return x


def zdt_evaluate(x, variant: int = 1) -> np.ndarray:
    x = _unit_box(x)
    d = x.size
    if d < 2:
        raise ValueError("ZDT needs at least 2 variables")
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (d - 1)
    if variant == 1:
        f2 = g * (1.0 - math.sqrt(f1 / g))
    elif variant == 2:
        f2 = g * (1.0 - (f1 / g) ** 2)
    else:
        raise ValueError(f"unsupported ZDT variant {variant}")
    return np.array([f1, f2])


def dtlz2_evaluate(x, n_obj: int = 3) -> np.ndarray:
    x = _unit_box(x)
    if x.size < n_obj:
        raise ValueError(f"DTLZ2 with {n_obj} objectives needs at least {n_obj} variables")
    head, tail = x[: n_obj - 1], x[n_obj - 1:]
    g = float(np.sum((tail - 0.5) ** 2))
    angles = head * (math.pi / 2.0)
    f = np.empty(n_obj)
    for m in range(n_obj):
        value = 1.0 + g
        value *= np.prod(np.cos(angles[: n_obj - 1 - m]))
        if m > 0:
            value *= math.sin(angles[n_obj - 1 - m])
        f[m] = value
    return f


@dataclass(frozen=True)
class ZDT:
    variant: int = 1
    d: int = 30

    def __post_init__(self):
        if self.variant not in (1, 2):
            raise ValueError(f"unsupported ZDT variant {self.variant}")
        if self.d < 2:
            raise ValueError(f"ZDT needs d >= 2, got {self.d}")

    reentrant = True

    @property
    def name(self) -> str:
        return f"zdt{self.variant}"

    @property
    def space(self) -> ObjectiveSpace:
        return ObjectiveSpace.minimize(2)

    def random_genotype(self, rng: np.random.Generator) -> RealVector:
        return RealVector.random(np.zeros(self.d), np.ones(self.d), rng)

    def evaluate(self, genotype) -> np.ndarray:
        _unit_box(genotype, self.d)
        return zdt_evaluate(genotype, self.variant)

    def default_variation(self) -> VariationPipeline:
        return VariationPipeline(SBX(15.0), 0.9, PolynomialMutation(20.0), 1.0)


@dataclass(frozen=True)
class DTLZ2:
    n_obj: int = 3
    k: int = 10

    reentrant = True

    def __post_init__(self):
        if self.n_obj < 2 or self.k < 1:
            raise ValueError("DTLZ2 needs n_obj >= 2 and k >= 1")

    name = "dtlz2"

    @property
    def d(self) -> int:
        return self.n_obj + self.k - 1

    @property
    def space(self) -> ObjectiveSpace:
        return ObjectiveSpace.minimize(self.n_obj)

    def random_genotype(self, rng: np.random.Generator) -> RealVector:
        return RealVector.random(np.zeros(self.d), np.ones(self.d), rng)

    def evaluate(self, genotype) -> np.ndarray:
        _unit_box(genotype, self.d)
        return dtlz2_evaluate(genotype, self.n_obj)

    def default_variation(self) -> VariationPipeline:
        return VariationPipeline(SBX(15.0), 0.9, PolynomialMutation(20.0), 1.0)


# --------------------------------------------------------------------------
# Knapsack
# --------------------------------------------------------------------------


class InstanceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class KnapsackInstance:
    weights: tuple[int, ...]
    profits1: tuple[int, ...]
    profits2: tuple[int, ...]
    capacity: int

    def __post_init__(self):
        if not self.weights:
            raise ValueError("a knapsack instance needs at least one item")
        if not (len(self.weights) == len(self.profits1) == len(self.profits2)):
            raise ValueError("weights and profits differ in length")
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if min(self.weights) <= 0 or min(self.profits1) <= 0 or min(self.profits2) <= 0:
            raise ValueError("weights and profits must be positive")

    @property
    def n_items(self) -> int:
        return len(self.weights)


def knapsack_repair(bits, inst: KnapsackInstance) -> np.ndarray:
    """Drop selected items, worst profit/weight ratio first, until the load fits."""
    selected = np.array(getattr(bits, "genes", bits), dtype=bool)
    if selected.shape != (inst.n_items,):
        raise ValueError(f"selection of length {selected.size} for {inst.n_items} items")
    w = np.asarray(inst.weights)
    load = int(w[selected].sum())
    if load <= inst.capacity:
        return selected
    ratio = (np.asarray(inst.profits1) + np.asarray(inst.profits2)) / w
    order = sorted(np.flatnonzero(selected).tolist(), key=lambda i: (ratio[i], i))
    for i in order:
        selected[i] = False
        load -= int(w[i])
        if load <= inst.capacity:
            break
    return selected


def knapsack_evaluate(bits, inst: KnapsackInstance) -> np.ndarray:
    selected = knapsack_repair(bits, inst)
    return np.array([float(np.asarray(inst.profits1)[selected].sum()),
                     float(np.asarray(inst.profits2)[selected].sum())])


def load_knapsack_instance(path: str | os.PathLike) -> KnapsackInstance:
    """Read ``capacity <int>`` followed by ``<weight> <profit1> <profit2>`` lines."""
    capacity = None
    items: list[tuple[int, int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if capacity is None:
                if len(fields) != 2 or fields[0] != "capacity":
                    raise InstanceFormatError("expected header 'capacity <int>'", lineno)
                try:
                    capacity = int(fields[1])
                except ValueError:
                    raise InstanceFormatError(f"capacity {fields[1]!r} is not an integer", lineno) from None
                if capacity <= 0:
                    raise InstanceFormatError("capacity must be positive", lineno)
                continue
            if len(fields) != 3:
                raise InstanceFormatError(f"expected 3 fields per item, got {len(fields)}", lineno)
            try:
                values = tuple(int(f) for f in fields)
            except ValueError:
                raise InstanceFormatError(f"non-integer field in {line!r}", lineno) from None
            if min(values) <= 0:
                raise InstanceFormatError("weights and profits must be positive", lineno)
            items.append(values)
    if capacity is None:
        raise InstanceFormatError("missing 'capacity' header")
    if not items:
        raise InstanceFormatError("instance has no items")
    w, p1, p2 = zip(*items)
    return KnapsackInstance(w, p1, p2, capacity)


def random_knapsack_instance(n_items: int, seed: int = 0) -> KnapsackInstance:
    """Uncorrelated instance with weights and profits in 10..100 and half the total weight as capacity."""
    rng = np.random.default_rng(seed)
    w = rng.integers(10, 101, size=n_items)
    p1 = rng.integers(10, 101, size=n_items)
    p2 = rng.integers(10, 101, size=n_items)
    return KnapsackInstance(tuple(int(v) for v in w), tuple(int(v) for v in p1),
                            tuple(int(v) for v in p2), int(w.sum()) // 2)


@dataclass(frozen=True)
class Knapsack:
    instance: KnapsackInstance

    reentrant = True
    name = "knapsack"

    @property
    def space(self) -> ObjectiveSpace:
        return ObjectiveSpace.maximize(2)

    def random_genotype(self, rng: np.random.Generator) -> BitVector:
        return BitVector.random(self.instance.n_items, rng)

    def evaluate(self, genotype) -> np.ndarray:
        return knapsack_evaluate(genotype, self.instance)

    def default_variation(self) -> VariationPipeline:
        return VariationPipeline(OnePointCrossover(), 0.9, BitFlip(), 1.0)


def zdt1_front(n_points: int = 1000) -> np.ndarray:
    """Evenly spaced samples of the ZDT1 Pareto front ``f2 = 1 - sqrt(f1)``."""
    f1 = np.linspace(0.0, 1.0, n_points)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])
