"""Objective spaces and pairwise dominance relations.

Every comparison is carried out in *minimization form*: coordinates of
maximized objectives are negated at the comparison boundary, the caller's
vectors are never modified.

Two code paths are provided.  :func:`pareto_compare` and
:func:`relation_compare` work on a single pair with plain Python loops and
serve as the reference semantics.  :func:`dominance_matrix` and
:func:`outcomes_against` are the vectorised numpy versions used by the
population-level passes; the test-suite checks one against the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Sense",
    "ObjectiveSpace",
    "Outcome",
    "Lex",
    "Pareto",
    "Weak",
    "Strict",
    "Epsilon",
    "GDominance",
    "DominanceRelation",
    "as_vector",
    "pareto_compare",
    "relation_compare",
    "lexicographic_compare",
    "epsilon_dominates",
    "dominance_matrix",
    "outcomes_against",
    "nondominated_mask",
]


class Sense(enum.Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"

    @property
    def sign(self) -> float:
        return 1.0 if self is Sense.MINIMIZE else -1.0


@dataclass(frozen=True)
class ObjectiveSpace:
    """Number of objectives and the optimization sense of each one."""

    senses: tuple[Sense, ...]

    def __post_init__(self):
        senses = tuple(Sense(s) if not isinstance(s, Sense) else s for s in self.senses)
        object.__setattr__(self, "senses", senses)
        if len(senses) < 2:
            raise ValueError(f"an objective space needs at least 2 objectives, got {len(senses)}")

    @classmethod
    def minimize(cls, n_objectives: int) -> "ObjectiveSpace":
        return cls((Sense.MINIMIZE,) * n_objectives)

    @classmethod
    def maximize(cls, n_objectives: int) -> "ObjectiveSpace":
        return cls((Sense.MAXIMIZE,) * n_objectives)

    @property
    def n_objectives(self) -> int:
        return len(self.senses)

    @property
    def signs(self) -> np.ndarray:
        return np.array([s.sign for s in self.senses])

    def to_min(self, values) -> np.ndarray:
        """Return ``values`` (one vector or a 2-D stack) in minimization form."""
        arr = np.asarray(values, dtype=float)
        if arr.shape[-1] != self.n_objectives:
            raise ValueError(
                f"expected {self.n_objectives} objectives, got vector(s) of length {arr.shape[-1]}"
            )
        return arr * self.signs


class Outcome(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    def flipped(self) -> "Outcome":
        if self is Outcome.DOMINATES:
            return Outcome.DOMINATED_BY
        if self is Outcome.DOMINATED_BY:
            return Outcome.DOMINATES
        return self


class Lex(enum.IntEnum):
    """Result of a lexicographic comparison; ``LESS`` means the first vector is preferred."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


# --------------------------------------------------------------------------
# Relations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Pareto:
    """No worse everywhere, strictly better somewhere."""

    def validate(self, space: ObjectiveSpace) -> None:
        pass


@dataclass(frozen=True)
class Weak:
    """No worse in every objective.

    Equal vectors weakly dominate each other; they are reported as
    ``EQUIVALENT`` so that the outcome stays antisymmetric.
    """

    def validate(self, space: ObjectiveSpace) -> None:
        pass


@dataclass(frozen=True)
class Strict:
    """Strictly better in every objective."""

    def validate(self, space: ObjectiveSpace) -> None:
        pass


@dataclass(frozen=True)
class Epsilon:
    """Additive epsilon-dominance with one epsilon per objective.

    ``a`` epsilon-dominates ``b`` iff ``a_i - eps_i <= b_i`` for every ``i``
    with at least one strict inequality.  When both vectors epsilon-dominate
    each other they lie within one epsilon box of each other and the pair is
    reported ``EQUIVALENT``.
    """

    epsilon: tuple[float, ...]

    def __post_init__(self):
        eps = self.epsilon
        if np.isscalar(eps):
            eps = (float(eps),)
        eps = tuple(float(e) for e in eps)
        if not eps or any(not (e > 0) or not np.isfinite(e) for e in eps):
            raise ValueError(f"epsilon values must be positive and finite, got {eps}")
        object.__setattr__(self, "epsilon", eps)

    def vector(self, n_objectives: int) -> np.ndarray:
        if len(self.epsilon) == 1:
            return np.full(n_objectives, self.epsilon[0])
        if len(self.epsilon) != n_objectives:
            raise ValueError(
                f"epsilon has {len(self.epsilon)} entries for {n_objectives} objectives"
            )
        return np.array(self.epsilon)

    def validate(self, space: ObjectiveSpace) -> None:
        self.vector(space.n_objectives)


@dataclass(frozen=True)
class GDominance:
    """Reference-point (g-)dominance.

    A vector is *flagged* when it is no worse than the reference in every
    objective or no better in every objective.  Flagged vectors beat
    unflagged ones; two flagged vectors fall back to Pareto dominance; two
    unflagged vectors are incomparable.  The reference is given in the
    original (not sign-normalised) objective space.
    """

    reference: tuple[float, ...]

    def __post_init__(self):
        ref = tuple(float(r) for r in self.reference)
        if not all(np.isfinite(ref)):
            raise ValueError("g-dominance reference must be finite")
        object.__setattr__(self, "reference", ref)

    def validate(self, space: ObjectiveSpace) -> None:
        if len(self.reference) != space.n_objectives:
            raise ValueError(
                f"g-dominance reference has {len(self.reference)} entries "
                f"for {space.n_objectives} objectives"
            )


DominanceRelation = Union[Pareto, Weak, Strict, Epsilon, GDominance]


def as_vector(values, space: ObjectiveSpace) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != space.n_objectives:
        raise ValueError(
            f"objective vector of shape {arr.shape} does not match "
            f"{space.n_objectives} objectives"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"objective vector must be finite, got {arr.tolist()}")
    return arr


# --------------------------------------------------------------------------
# Scalar (reference) comparisons
# --------------------------------------------------------------------------


def _min_form(a, b, space: ObjectiveSpace) -> tuple[list[float], list[float]]:
    a = as_vector(a, space)
    b = as_vector(b, space)
    signs = [s.sign for s in space.senses]
    return [x * s for x, s in zip(a, signs)], [x * s for x, s in zip(b, signs)]


def _pareto_min(a: Sequence[float], b: Sequence[float]) -> Outcome:
    a_better = b_better = False
    for x, y in zip(a, b):
        if x < y:
            a_better = True
        elif y < x:
            b_better = True
    if a_better and not b_better:
        return Outcome.DOMINATES
    if b_better and not a_better:
        return Outcome.DOMINATED_BY
    if not a_better and not b_better:
        return Outcome.EQUIVALENT
    return Outcome.INCOMPARABLE


def _strict_min(a, b) -> Outcome:
    if all(x == y for x, y in zip(a, b)):
        return Outcome.EQUIVALENT
    if all(x < y for x, y in zip(a, b)):
        return Outcome.DOMINATES
    if all(y < x for x, y in zip(a, b)):
        return Outcome.DOMINATED_BY
    return Outcome.INCOMPARABLE


def _eps_dom_min(a, b, eps) -> bool:
    strict = False
    for x, y, e in zip(a, b, eps):
        shifted = x - e
        if shifted > y:
            return False
        if shifted < y:
            strict = True
    return strict


def _epsilon_min(a, b, eps) -> Outcome:
    if all(x == y for x, y in zip(a, b)):
        return Outcome.EQUIVALENT
    ab = _eps_dom_min(a, b, eps)
    ba = _eps_dom_min(b, a, eps)
    if ab and ba:
        return Outcome.EQUIVALENT
    if ab:
        return Outcome.DOMINATES
    if ba:
        return Outcome.DOMINATED_BY
    return Outcome.INCOMPARABLE


def _g_flag(z, ref) -> int:
    if all(x <= r for x, r in zip(z, ref)) or all(x >= r for x, r in zip(z, ref)):
        return 1
    return 0


def _g_min(a, b, ref) -> Outcome:
    if all(x == y for x, y in zip(a, b)):
        return Outcome.EQUIVALENT
    fa, fb = _g_flag(a, ref), _g_flag(b, ref)
    if fa > fb:
        return Outcome.DOMINATES
    if fb > fa:
        return Outcome.DOMINATED_BY
    if fa == 0:
        return Outcome.INCOMPARABLE
    return _pareto_min(a, b)


def pareto_compare(a, b, space: ObjectiveSpace) -> Outcome:
    """Compare two objective vectors under Pareto dominance.

    >>> space = ObjectiveSpace.minimize(2)
    >>> pareto_compare((1, 2), (2, 3), space)
    <Outcome.DOMINATES: 'dominates'>
    """
    a, b = _min_form(a, b, space)
    return _pareto_min(a, b)


def relation_compare(a, b, space: ObjectiveSpace, rel: DominanceRelation) -> Outcome:
    """Compare ``a`` with ``b`` under an arbitrary dominance relation."""
    rel.validate(space)
    a, b = _min_form(a, b, space)
    if isinstance(rel, (Pareto, Weak)):
        # Weak differs from Pareto only on equal vectors, which both report EQUIVALENT.
        return _pareto_min(a, b)
    if isinstance(rel, Strict):
        return _strict_min(a, b)
    if isinstance(rel, Epsilon):
        return _epsilon_min(a, b, list(rel.vector(space.n_objectives)))
    if isinstance(rel, GDominance):
        ref = [r * s.sign for r, s in zip(rel.reference, space.senses)]
        return _g_min(a, b, ref)
    raise TypeError(f"unknown dominance relation {rel!r}")


def epsilon_dominates(a, b, space: ObjectiveSpace, epsilon) -> bool:
    """One-sided additive epsilon-dominance test (no symmetry resolution)."""
    rel = epsilon if isinstance(epsilon, Epsilon) else Epsilon(epsilon)
    a, b = _min_form(a, b, space)
    return _eps_dom_min(a, b, list(rel.vector(space.n_objectives)))


def lexicographic_compare(a, b, space: ObjectiveSpace, priority: Sequence[int]) -> Lex:
    """Compare objectives one at a time in ``priority`` order."""
    priority = list(priority)
    if sorted(priority) != list(range(space.n_objectives)):
        raise ValueError(f"priority {priority} is not a permutation of 0..{space.n_objectives - 1}")
    a, b = _min_form(a, b, space)
    for i in priority:
        if a[i] < b[i]:
            return Lex.LESS
        if a[i] > b[i]:
            return Lex.GREATER
    return Lex.EQUAL


# --------------------------------------------------------------------------
# Vectorised comparisons (inputs already in minimization form)
# --------------------------------------------------------------------------


def _all_pairs(A: np.ndarray, B: np.ndarray, op) -> np.ndarray:
    out = np.ones((A.shape[0], B.shape[0]), dtype=bool)
    for j in range(A.shape[1]):
        out &= op(A[:, j, None], B[None, :, j])
    return out


def _any_pairs(A: np.ndarray, B: np.ndarray, op) -> np.ndarray:
    out = np.zeros((A.shape[0], B.shape[0]), dtype=bool)
    for j in range(A.shape[1]):
        out |= op(A[:, j, None], B[None, :, j])
    return out


def _pareto_pairs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return _all_pairs(A, B, np.less_equal) & _any_pairs(A, B, np.less)


def _one_sided(A: np.ndarray, B: np.ndarray, rel: DominanceRelation, space: ObjectiveSpace) -> np.ndarray:
    """``out[i, j]`` is True when ``A[i]`` dominates ``B[j]`` (one-sided, before symmetry fixes)."""
    if isinstance(rel, (Pareto, Weak)):
        return _pareto_pairs(A, B)
    if isinstance(rel, Strict):
        return _all_pairs(A, B, np.less)
    if isinstance(rel, Epsilon):
        shifted = A - rel.vector(space.n_objectives)
        return _pareto_pairs(shifted, B)
    if isinstance(rel, GDominance):
        ref = np.asarray(rel.reference) * space.signs
        fa = (np.all(A <= ref, axis=1) | np.all(A >= ref, axis=1))[:, None]
        fb = (np.all(B <= ref, axis=1) | np.all(B >= ref, axis=1))[None, :]
        return (fa & ~fb) | (fa & fb & _pareto_pairs(A, B))
    raise TypeError(f"unknown dominance relation {rel!r}")


def dominance_matrix(F_min: np.ndarray, rel: DominanceRelation, space: ObjectiveSpace) -> np.ndarray:
    """Boolean matrix ``D`` with ``D[i, j]`` True when row ``i`` dominates row ``j``.

    ``F_min`` holds one objective vector per row, already in minimization form.
    """
    F_min = np.asarray(F_min, dtype=float)
    if isinstance(rel, (Pareto, Weak)):
        le = _all_pairs(F_min, F_min, np.less_equal)
        # a <= b and b <= a only for equal rows
        return le & ~le.T
    D = _one_sided(F_min, F_min, rel, space)
    if isinstance(rel, Epsilon):
        D &= ~D.T
    np.fill_diagonal(D, False)
    return D


def outcomes_against(a_min: np.ndarray, B_min: np.ndarray, rel: DominanceRelation, space: ObjectiveSpace):
    """Compare one vector against many.

    Returns:
        ``(a_dominates, dominated_by, equivalent)`` boolean arrays over the rows of ``B_min``.
    """
    a = np.asarray(a_min, dtype=float)[None, :]
    B = np.asarray(B_min, dtype=float).reshape(-1, a.shape[1])
    ab = _one_sided(a, B, rel, space)[0]
    ba = _one_sided(B, a, rel, space)[:, 0]
    equal = np.all(B == a, axis=1)
    mutual = ab & ba
    equivalent = equal | mutual
    return ab & ~equivalent, ba & ~equivalent, equivalent


def nondominated_mask(F_min: np.ndarray, rel: DominanceRelation | None = None,
                      space: ObjectiveSpace | None = None) -> np.ndarray:
    """Rows of ``F_min`` not dominated by any other row (Pareto by default)."""
    F_min = np.asarray(F_min, dtype=float)
    if F_min.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    rel = rel or Pareto()
    space = space or ObjectiveSpace.minimize(F_min.shape[1])
    return ~dominance_matrix(F_min, rel, space).any(axis=0)
