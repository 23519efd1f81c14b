"""Quality indicators for approximation sets.

Fronts are 2-D arrays with one objective vector per row.  Every function
takes an optional :class:`~emoframe.dominance.ObjectiveSpace`; when it is
omitted all objectives are minimized.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .dominance import ObjectiveSpace, nondominated_mask

__all__ = [
    "HypervolumeValue",
    "DEFAULT_SAMPLES",
    "as_front",
    "nondominated_front",
    "hypervolume",
    "hypervolume_2d",
    "monte_carlo_hypervolume",
    "binary_hypervolume",
    "epsilon_indicator",
    "contribution",
]

DEFAULT_SAMPLES = 100_000


class HypervolumeValue(float):
    """A float that remembers whether it was estimated by sampling."""

    estimate: bool
    samples: int

    def __new__(cls, value: float, estimate: bool = False, samples: int = 0):
        obj = super().__new__(cls, value)
        obj.estimate = estimate
        obj.samples = samples
        return obj

    def __repr__(self) -> str:
        if self.estimate:
            return f"HypervolumeValue({float(self)!r}, estimate=True, samples={self.samples})"
        return f"HypervolumeValue({float(self)!r})"


def as_front(points, space: Optional[ObjectiveSpace] = None) -> tuple[np.ndarray, ObjectiveSpace]:
    """Validate ``points`` and return them with the space they live in."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        n = space.n_objectives if space is not None else (arr.shape[1] if arr.ndim == 2 else 2)
        arr = arr.reshape(0, n)
    if arr.ndim != 2:
        raise ValueError(f"a front must be a 2-D array of objective vectors, got shape {arr.shape}")
    if space is None:
        space = ObjectiveSpace.minimize(arr.shape[1])
    if arr.shape[1] != space.n_objectives:
        raise ValueError(f"front has {arr.shape[1]} objectives, space has {space.n_objectives}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("front contains non-finite values")
    return arr, space


def nondominated_front(F_min: np.ndarray) -> np.ndarray:
    """Deduplicated, nondominated rows of a minimization-form front."""
    if F_min.shape[0] == 0:
        return F_min
    uniq = np.unique(F_min, axis=0)
    return uniq[nondominated_mask(uniq)]


def _min_ref(ref, space: ObjectiveSpace) -> np.ndarray:
    r = np.asarray(ref, dtype=float)
    if r.shape != (space.n_objectives,) or not np.all(np.isfinite(r)):
        raise ValueError(f"reference point must hold {space.n_objectives} finite values")
    return space.to_min(r)


def _check_ref(F_min: np.ndarray, r_min: np.ndarray) -> None:
    if F_min.shape[0] and not np.all(F_min < r_min):
        bad = int(np.flatnonzero(~np.all(F_min < r_min, axis=1))[0])
        raise ValueError(
            f"reference point is not strictly worse than front point {bad} in every objective"
        )


def hypervolume_2d(F_min: np.ndarray, r_min: np.ndarray) -> float:
    """Exact 2-D hypervolume by a sweep over the first objective."""
    front = nondominated_front(F_min)
    if front.shape[0] == 0:
        return 0.0
    order = np.argsort(front[:, 0], kind="stable")
    f1 = front[order, 0]
    f2 = front[order, 1]
    # nondominated and sorted by f1 => f2 strictly decreasing
    widths = np.append(f1[1:], r_min[0]) - f1
    heights = r_min[1] - f2
    return float(np.sum(widths * heights))


def monte_carlo_hypervolume(F_min: np.ndarray, r_min: np.ndarray, samples: int = DEFAULT_SAMPLES,
                            seed: int = 0) -> HypervolumeValue:
    """Estimate the hypervolume by uniform sampling in the box ``[ideal, ref]``."""
    front = nondominated_front(F_min)
    if front.shape[0] == 0:
        return HypervolumeValue(0.0, estimate=True, samples=samples)
    lo = front.min(axis=0)
    box = float(np.prod(r_min - lo))
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 20_000
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        pts = rng.uniform(lo, r_min, size=(m, front.shape[1]))
        covered = np.zeros(m, dtype=bool)
        for f in front:
            covered |= np.all(pts >= f, axis=1)
        hits += int(covered.sum())
    return HypervolumeValue(box * hits / samples, estimate=True, samples=samples)


def hypervolume(points, ref, space: Optional[ObjectiveSpace] = None, *,
                samples: int = DEFAULT_SAMPLES, seed: int = 0) -> HypervolumeValue:
    """Measure of the region weakly dominated by ``points`` and bounded by ``ref``.

    Exact for two objectives; a seeded Monte Carlo estimate (flagged via
    ``.estimate``) for three or more.

    >>> hypervolume([[1, 1]], [2, 2])
    HypervolumeValue(1.0)
    """
    F, space = as_front(points, space)
    F_min = space.to_min(F)
    r_min = _min_ref(ref, space)
    _check_ref(F_min, r_min)
    if F_min.shape[0] == 0:
        return HypervolumeValue(0.0, estimate=space.n_objectives > 2, samples=0)
    if space.n_objectives == 2:
        return HypervolumeValue(hypervolume_2d(F_min, r_min))
    return monte_carlo_hypervolume(F_min, r_min, samples, seed)


def binary_hypervolume(a, b, ref, space: Optional[ObjectiveSpace] = None, *,
                       samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
    """Hypervolume dominated by ``a`` but not by ``b``: ``HV(a + b) - HV(b)``."""
    A, space = as_front(a, space)
    B, _ = as_front(b, space)
    union = np.vstack([A, B])
    hv_union = hypervolume(union, ref, space, samples=samples, seed=seed)
    hv_b = hypervolume(B, ref, space, samples=samples, seed=seed)
    return float(hv_union) - float(hv_b)


def epsilon_indicator(a, b, mode: str = "additive", space: Optional[ObjectiveSpace] = None) -> float:
    """Smallest epsilon by which ``a`` must be shifted (or scaled) to weakly dominate ``b``.

    ``mode`` is ``"additive"`` or ``"multiplicative"``.  In multiplicative
    mode maximized objectives are turned into minimized ones through their
    reciprocal, so all values must be strictly positive.
    """
    A, space = as_front(a, space)
    B, _ = as_front(b, space)
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise ValueError("epsilon indicator needs two nonempty fronts")
    if mode == "additive":
        A_min = nondominated_front(space.to_min(A))
        B_min = nondominated_front(space.to_min(B))
        gaps = np.max(A_min[:, None, :] - B_min[None, :, :], axis=2)
    elif mode == "multiplicative":
        if np.any(A <= 0) or np.any(B <= 0):
            raise ValueError("multiplicative epsilon indicator needs strictly positive objective values")
        maximize = space.signs < 0
        A_min = np.where(maximize, 1.0 / A, A)
        B_min = np.where(maximize, 1.0 / B, B)
        A_min = nondominated_front(A_min)
        B_min = nondominated_front(B_min)
        gaps = np.max(A_min[:, None, :] / B_min[None, :, :], axis=2)
    else:
        raise ValueError(f"unknown epsilon mode {mode!r}")
    return float(np.max(np.min(gaps, axis=0)))


def contribution(a, b, space: Optional[ObjectiveSpace] = None) -> float:
    """Share of the joint nondominated set contributed by ``a`` (shared points count half)."""
    A, space = as_front(a, space)
    B, _ = as_front(b, space)
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise ValueError("contribution needs two nonempty fronts")
    A_min = np.unique(space.to_min(A), axis=0)
    B_min = np.unique(space.to_min(B), axis=0)
    joint = nondominated_front(np.vstack([A_min, B_min]))
    in_a = (joint[:, None, :] == A_min[None, :, :]).all(axis=2).any(axis=1)
    in_b = (joint[:, None, :] == B_min[None, :, :]).all(axis=2).any(axis=1)
    score = np.sum(in_a & ~in_b) + 0.5 * np.sum(in_a & in_b)
    return float(score / joint.shape[0])
