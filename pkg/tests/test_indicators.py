import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import grid_hypervolume_2d

from emoframe.dominance import ObjectiveSpace, Sense
from emoframe.indicators import (binary_hypervolume, contribution, epsilon_indicator, hypervolume,
                                 monte_carlo_hypervolume)

MINMIN = ObjectiveSpace.minimize(2)


def test_hypervolume_examples():
    assert hypervolume([(1, 1)], (2, 2)) == 1.0
    assert hypervolume([(0.5, 1.5), (1.5, 0.5)], (2, 2)) == 1.25
    assert hypervolume(np.zeros((0, 2)), (2, 2)) == 0.0
    assert hypervolume([(0.5, 0.5)], (2, 2)) == 2.25
    assert not hypervolume([(1, 1)], (2, 2)).estimate


def test_hypervolume_bad_reference():
    with pytest.raises(ValueError):
        hypervolume([(1, 1)], (1, 2))
    with pytest.raises(ValueError):
        hypervolume([(1, 1)], (2, 2, 2))


def test_hypervolume_maximize_and_dominated_points():
    space = ObjectiveSpace((Sense.MAXIMIZE, Sense.MAXIMIZE))
    assert hypervolume([(3, 3)], (1, 1), space) == 4.0
    assert hypervolume([(1, 1), (1.5, 1.5), (1, 1)], (2, 2)) == 1.0


def test_monte_carlo_flagged_for_three_objectives():
    hv = hypervolume([(0.5, 0.5, 0.5)], (1, 1, 1), samples=20_000, seed=3)
    assert hv.estimate and hv.samples == 20_000
    assert hv == pytest.approx(0.125, abs=1e-12)  # box equals the dominated region
    hv2 = hypervolume([(0, 0.5, 0.5), (0.5, 0, 0.5)], (1, 1, 1), samples=20_000, seed=3)
    assert hv2 == hypervolume([(0, 0.5, 0.5), (0.5, 0, 0.5)], (1, 1, 1), samples=20_000, seed=3)
    assert abs(hv2 - 0.375) < 0.02


def test_binary_hypervolume_examples():
    assert binary_hypervolume([(1, 1)], [(1, 1)], (2, 2)) == 0.0
    assert binary_hypervolume([(0.5, 0.5)], [(1, 1)], (2, 2)) == pytest.approx(1.25)
    assert binary_hypervolume(np.zeros((0, 2)), [(1, 1)], (2, 2)) == 0.0


def test_epsilon_examples():
    A, B = [(1, 1)], [(2, 2)]
    assert epsilon_indicator(A, B) == -1.0
    assert epsilon_indicator(B, A) == 1.0
    assert epsilon_indicator(A, B, "multiplicative") == 0.5
    with pytest.raises(ValueError):
        epsilon_indicator([(0, 1)], B, "multiplicative")
    with pytest.raises(ValueError):
        epsilon_indicator(np.zeros((0, 2)), B)
    with pytest.raises(ValueError):
        epsilon_indicator(A, B, "bogus")


def test_contribution_examples():
    A = [(1, 2), (2, 1)]
    assert contribution(A, A) == 0.5
    assert contribution([(0, 0)], A) == 1.0
    assert contribution([(1, 2)], [(2, 1)]) == 0.5
    with pytest.raises(ValueError):
        contribution(np.zeros((0, 2)), A)


def random_front(rng, n, m=2):
    return rng.random((n, m)) * 10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_exact_hv_matches_inclusion_exclusion(seed, n):
    rng = np.random.default_rng(seed)
    F = np.round(random_front(rng, n), 1)
    assert hypervolume(F, (11, 11)) == pytest.approx(grid_hypervolume_2d(F, (11, 11)), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 20))
def test_hv_monotone_under_additions(seed, n):
    rng = np.random.default_rng(seed)
    F = random_front(rng, n)
    p = random_front(rng, 1)
    before = hypervolume(F, (11, 11))
    after = hypervolume(np.vstack([F, p]), (11, 11))
    dominated = np.any(np.all(F <= p, axis=1))
    if dominated:
        assert after == pytest.approx(before, abs=1e-12)
    else:
        assert after > before


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 15), st.integers(1, 15))
def test_indicator_identities_and_permutation(seed, na, nb):
    rng = np.random.default_rng(seed)
    A, B = random_front(rng, na) + 0.1, random_front(rng, nb) + 0.1
    assert epsilon_indicator(A, A) == 0.0
    assert epsilon_indicator(A, A, "multiplicative") == 1.0
    assert binary_hypervolume(A, A, (11, 11)) == 0.0
    assert abs(contribution(A, B) + contribution(B, A) - 1.0) < 1e-12
    pa = A[rng.permutation(na)]
    assert epsilon_indicator(pa, B) == epsilon_indicator(A, B)
    assert contribution(pa, B) == contribution(A, B)
    assert hypervolume(pa, (11, 11)) == hypervolume(A, (11, 11))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 15))
def test_epsilon_nonpositive_when_a_covers_b(seed, n):
    rng = np.random.default_rng(seed)
    A = random_front(rng, n)
    B = A[rng.integers(0, n, size=n)] + rng.random((n, 2))
    assert epsilon_indicator(A, B) <= 0.0


def test_monte_carlo_within_three_sigma_of_exact():
    rng = np.random.default_rng(11)
    samples = 50_000
    for _ in range(5):
        F = random_front(rng, 8)
        exact = float(hypervolume(F, (11, 11)))
        box = float(np.prod(11 - F.min(axis=0)))
        est = float(monte_carlo_hypervolume(F, np.array([11.0, 11.0]), samples, seed=1))
        p = exact / box
        sigma = box * math.sqrt(p * (1 - p) / samples)
        assert abs(est - exact) <= 3 * sigma + 1e-12
