import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emoframe.problems import ZDT
from emoframe.solution import (SBX, BitFlip, BitVector, CombinedInit, EvaluationError, Individual,
                               OnePointCrossover, OrderCrossover, Permutation, PolynomialMutation, RealVector,
                               SwapMutation, VariationPipeline, apply_variation, evaluate, initialize_population)


def counting(fn):
    def wrapped(g):
        wrapped.calls += 1
        return fn(g)
    wrapped.calls = 0
    return wrapped


def test_initialize_shapes():
    rng = np.random.default_rng(0)
    pop = initialize_population(lambda r: BitVector.random(4, r), 3, rng)
    assert len(pop) == 3 and all(len(i.genotype.genes) == 4 and not i.valid for i in pop)
    pop = initialize_population(lambda r: RealVector.random(np.zeros(5), np.ones(5), r), 10, rng)
    assert all(np.all((0 <= i.genotype.genes) & (i.genotype.genes <= 1)) for i in pop)
    pop = initialize_population(lambda r: Permutation.random(6, r), 5, rng)
    assert all(sorted(i.genotype.genes.tolist()) == list(range(6)) for i in pop)
    with pytest.raises(ValueError):
        initialize_population(lambda r: BitVector.random(4, r), 0, rng)


def test_initialize_reproducible():
    make = lambda: initialize_population(lambda r: BitVector.random(8, r), 4, np.random.default_rng(7))
    assert [i.genotype.genes.tolist() for i in make()] == [i.genotype.genes.tolist() for i in make()]


def test_combined_init_round_robin():
    init = CombinedInit(lambda r: BitVector(np.zeros(3, dtype=bool)), lambda r: BitVector(np.ones(3, dtype=bool)))
    pop = initialize_population(init, 4, np.random.default_rng(0))
    assert [int(i.genotype.genes.sum()) for i in pop] == [0, 3, 0, 3]


def test_genotype_invariants():
    with pytest.raises(ValueError):
        RealVector(np.array([2.0]), np.array([0.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        Permutation(np.array([0, 0, 1]))
    g = RealVector(np.array([0.5]), np.array([0.0]), np.array([1.0]))
    assert g.with_genes([3.0]).genes[0] == 1.0
    with pytest.raises(ValueError):
        g.genes[0] = 0.1


def test_evaluate_counts_and_skips():
    problem = ZDT(1, 5)
    rng = np.random.default_rng(1)
    pop = initialize_population(problem.random_genotype, 3, rng)
    ev = counting(problem.evaluate)
    assert evaluate(pop, ev) == 3 and ev.calls == 3
    pop.append(Individual(problem.random_genotype(rng)))
    assert evaluate(pop, ev) == 1 and ev.calls == 4
    assert evaluate(pop, ev) == 0


def test_evaluate_zdt1_origin():
    ind = Individual(RealVector(np.zeros(30), np.zeros(30), np.ones(30)))
    evaluate([ind], ZDT(1).evaluate)
    assert ind.objectives.tolist() == [0.0, 1.0] and ind.valid


def test_evaluation_error_names_index():
    pop = [Individual(BitVector(np.zeros(2, dtype=bool))) for _ in range(3)]

    def bad(g):
        raise RuntimeError("boom")

    with pytest.raises(EvaluationError) as info:
        evaluate(pop, bad)
    assert info.value.index == 0


def _valid(genotype):
    ind = Individual(genotype)
    ind.set_objectives([0.0, 0.0])
    ind.fitness = 1.0
    return ind


def test_identity_pipeline():
    rng = np.random.default_rng(0)
    parents = [_valid(BitVector.random(5, rng)) for _ in range(4)]
    kids = apply_variation(parents, VariationPipeline(OnePointCrossover(), 0.0, BitFlip(), 0.0), rng)
    assert all(k.valid and np.array_equal(k.genotype.genes, p.genotype.genes) for k, p in zip(kids, parents))
    assert all(k is not p for k, p in zip(kids, parents))


def test_full_bit_flip():
    parent = _valid(BitVector(np.array([1, 0, 1], dtype=bool)))
    (kid,) = apply_variation([parent], VariationPipeline(None, 1.0, BitFlip(1.0), 1.0), np.random.default_rng(0))
    assert kid.genotype.genes.astype(int).tolist() == [0, 1, 0]
    assert not kid.valid and kid.fitness is None


def test_one_point_forced_cut():
    a = _valid(BitVector(np.ones(4, dtype=bool)))
    b = _valid(BitVector(np.zeros(4, dtype=bool)))
    kids = apply_variation([a, b], VariationPipeline(OnePointCrossover(cut=2), 1.0, None, 0.0),
                           np.random.default_rng(0))
    assert [k.genotype.genes.astype(int).tolist() for k in kids] == [[1, 1, 0, 0], [0, 0, 1, 1]]


def test_odd_parent_skips_crossover():
    rng = np.random.default_rng(0)
    parents = [_valid(BitVector(np.full(4, i % 2, dtype=bool))) for i in range(3)]
    kids = apply_variation(parents, VariationPipeline(OnePointCrossover(cut=2), 1.0, None, 0.0), rng)
    assert kids[2].valid and kids[2].genotype.genes.tolist() == parents[2].genotype.genes.tolist()


def test_kind_mismatch():
    parents = [_valid(BitVector.random(4, np.random.default_rng(0)))]
    with pytest.raises(TypeError):
        apply_variation(parents, VariationPipeline(None, 0.0, SwapMutation(), 1.0), np.random.default_rng(0))


def test_rates_validated():
    with pytest.raises(ValueError):
        VariationPipeline(None, 1.5, None, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 12))
def test_variation_closure(seed, length):
    rng = np.random.default_rng(seed)
    lo, hi = -np.ones(length), 2 * np.ones(length)
    reals = [_valid(RealVector.random(lo, hi, rng)) for _ in range(6)]
    for k in apply_variation(reals, VariationPipeline(SBX(), 1.0, PolynomialMutation(rate=1.0), 1.0), rng):
        assert np.all((lo <= k.genotype.genes) & (k.genotype.genes <= hi))
    perms = [_valid(Permutation.random(length, rng)) for _ in range(6)]
    for k in apply_variation(perms, VariationPipeline(OrderCrossover(), 1.0, SwapMutation(), 1.0), rng):
        assert sorted(k.genotype.genes.tolist()) == list(range(length))


def test_variation_reproducible():
    def go():
        rng = np.random.default_rng(5)
        parents = [_valid(RealVector.random(np.zeros(4), np.ones(4), rng)) for _ in range(4)]
        kids = apply_variation(parents, VariationPipeline(SBX(), 0.9, PolynomialMutation(), 1.0), rng)
        return [k.genotype.genes.tolist() for k in kids]
    assert go() == go()
