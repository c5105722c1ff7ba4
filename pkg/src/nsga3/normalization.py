"""Objective normalization: ideal/max trackers, extreme points, hyperplane
intercepts and the Nadir point estimate with its fallbacks.

Absent trackers (the +inf / -inf sentinels before the first generation) are
``None`` rather than floating infinities, and the extreme-point archive
starts empty instead of holding an all -inf entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import InvalidParameterError, InvalidStateError

ASF_OFF_AXIS_WEIGHT = 1e-6


@dataclass(frozen=True)
class NormalizationState:
    eps_nad: float
    y_min: np.ndarray | None = None
    y_max: np.ndarray | None = None
    archive: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.eps_nad > 0:
            raise InvalidParameterError(f"eps_nad must be positive, got {self.eps_nad}")


@dataclass
class Normalization:
    """Outcome of one normalization pass."""

    y_min: np.ndarray
    y_max: np.ndarray
    y_nad: np.ndarray
    valid: bool
    extremes: list[tuple[int, ...]]
    intercepts: tuple[Fraction, ...] | None
    denominators: np.ndarray = field(init=False)

    def __post_init__(self):
        span = self.y_nad - self.y_min
        self.denominators = np.where(span == 0, 1.0, span)

    def __call__(self, F) -> np.ndarray:
        return (np.asarray(F, dtype=np.float64) - self.y_min) / self.denominators

    def as_dict(self) -> dict:
        return {
            "y_min": self.y_min.tolist(),
            "y_max": self.y_max.tolist(),
            "y_nad": self.y_nad.tolist(),
            "valid": self.valid,
        }


def update_trackers(state: NormalizationState, R_fit, F1_fit) -> NormalizationState:
    """Running minimum over the joint population, running maximum over the first layer."""
    R_fit = np.asarray(R_fit)
    F1_fit = np.asarray(F1_fit)
    if R_fit.size == 0 or F1_fit.size == 0:
        raise InvalidStateError("update_trackers needs non-empty R_t and first layer")
    lo = R_fit.min(axis=0).astype(np.float64)
    hi = F1_fit.max(axis=0).astype(np.float64)
    y_min = lo if state.y_min is None else np.minimum(state.y_min, lo)
    y_max = hi if state.y_max is None else np.maximum(state.y_max, hi)
    return replace(state, y_min=y_min, y_max=y_max)


def asf(y, y_min, axis: int) -> float:
    y = np.asarray(y, dtype=np.float64)
    w = np.full(y.shape, ASF_OFF_AXIS_WEIGHT)
    w[axis] = 1.0
    return float(np.max((y - y_min) / w))


def extreme_points(candidates, y_min) -> list[tuple[int, ...]]:
    """One extreme point per axis by achievement scalarization.

    ``e_j`` minimizes ``max_i (y_i - y_min_i) / w_i`` with ``w_j = 1`` and
    ``w_i = 1e-6`` otherwise; ties go to the lexicographically smallest vector.
    """
    cands = sorted({tuple(int(a) for a in c) for c in candidates})
    if not cands:
        raise InvalidStateError("no extreme-point candidates besides the sentinel")
    C = np.array(cands, dtype=np.float64)
    y_min = np.asarray(y_min, dtype=np.float64)
    m = C.shape[1]
    out = []
    for j in range(m):
        w = np.full(m, ASF_OFF_AXIS_WEIGHT)
        w[j] = 1.0
        scores = np.max((C - y_min) / w, axis=1)
        out.append(cands[int(np.argmin(scores))])
    return out


def _solve_exact(E: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    m = len(E)
    A = [row[:] + [rhs] for row, rhs in zip(E, b)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if A[r][col] != 0), None)
        if pivot is None:
            return None
        A[col], A[pivot] = A[pivot], A[col]
        for r in range(m):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][m] / A[i][i] for i in range(m)]


def hyperplane_intercepts(extremes) -> tuple[Fraction, ...] | None:
    """Axis intercepts of the hyperplane through the extreme points.

    Solves ``E a = 1`` exactly (rows of ``E`` are the extreme points) and
    returns ``1 / a_j`` per axis, or ``None`` if the points are linearly
    dependent or the plane is parallel to some axis.
    """
    E = [[Fraction(x) for x in e] for e in extremes]
    m = len(E)
    if any(len(row) != m for row in E):
        raise InvalidParameterError("need m extreme points of dimension m")
    a = _solve_exact(E, [Fraction(1)] * m)
    if a is None or any(x == 0 for x in a):
        return None
    return tuple(1 / x for x in a)


def nadir_estimate(state: NormalizationState, intercepts, F1_fit, all_fit) -> tuple[np.ndarray, bool]:
    """Nadir point estimate and the ``valid`` flag.

    Intercepts are accepted only if every axis satisfies
    ``eps_nad <= I_j <= y_max_j``; otherwise every axis falls back to the
    first-layer maximum. Any axis still below ``y_min_j + eps_nad`` is then
    raised to the maximum over all layers.
    """
    if state.y_min is None or state.y_max is None:
        raise InvalidStateError("trackers must be updated before estimating the nadir point")
    m = len(state.y_min)
    eps = state.eps_nad
    y_nad: list = [None] * m
    valid = intercepts is not None
    if valid:
        for j in range(m):
            I = intercepts[j]
            if I >= eps and I <= state.y_max[j]:
                y_nad[j] = I
            else:
                valid = False
                break
    if not valid:
        y_nad = list(np.asarray(F1_fit).max(axis=0))
    top = np.asarray(all_fit).max(axis=0)
    for j in range(m):
        if y_nad[j] < state.y_min[j] + eps:
            y_nad[j] = top[j]
    return np.array([float(x) for x in y_nad]), valid


def normalize(f_x, y_min, y_nad) -> np.ndarray:
    """``(f - y_min) / (y_nad - y_min)`` per axis; a zero span divides by 1."""
    y_min = np.asarray(y_min, dtype=np.float64)
    span = np.asarray(y_nad, dtype=np.float64) - y_min
    return (np.asarray(f_x, dtype=np.float64) - y_min) / np.where(span == 0, 1.0, span)


def normalize_generation(state: NormalizationState, R_fit: np.ndarray, layers, i_star: int
                         ) -> tuple[NormalizationState, Normalization]:
    """Run the whole normalization for one generation.

    ``layers`` index rows of ``R_fit``; extreme-point candidates come from
    layers ``1..i_star`` plus the previous archive.
    """
    F1 = R_fit[layers[0]]
    state = update_trackers(state, R_fit, F1)
    ranked = np.concatenate(layers[:i_star])
    candidates = [tuple(int(a) for a in row) for row in np.unique(R_fit[ranked], axis=0)]
    candidates.extend(state.archive)
    extremes = extreme_points(candidates, state.y_min)
    state = replace(state, archive=tuple(extremes))
    intercepts = hyperplane_intercepts(extremes)
    y_nad, valid = nadir_estimate(state, intercepts, F1, R_fit)
    return state, Normalization(state.y_min, state.y_max, y_nad, valid, extremes, intercepts)
