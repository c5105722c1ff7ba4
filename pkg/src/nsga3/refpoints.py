"""Simplex-lattice reference points and ray association.

A reference point is identified by its composition ``a`` (non-negative
integers summing to ``p``); the point itself is ``a / p``. Association maps a
normalized fitness vector to the composition whose ray through the origin
is nearest in perpendicular distance. Ties within ``TIE_RTOL * |v|`` go to
the lexicographically smallest composition.

Lattice mode never materializes R_p. For ``t = v / sum(v)`` and any simplex
point ``r`` the ray distance satisfies ``d(t, r) >= |t - r| / sqrt(m)``, so
the nearest ray lies within Euclidean distance ``sqrt(m) * d(t, r0)`` of
``t``, where ``r0`` is the rounding construction. Enumerating that ball is
exact; a fixed L-infinity box of ``radius`` around ``r0`` is available as a
cheaper heuristic.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import CapacityError, InvalidParameterError

DEFAULT_MATERIALIZATION_BUDGET = 10**6
TIE_RTOL = 1e-12
MODES = ("auto", "exhaustive", "lattice")


def reference_point_count(m: int, p: int) -> int:
    """Number of weak m-compositions of p, i.e. C(p+m-1, m-1)."""
    if m < 1 or p < 1:
        raise InvalidParameterError(f"need m >= 1 and p >= 1, got m={m}, p={p}")
    return math.comb(p + m - 1, m - 1)


def reference_point_array(m: int, p: int, budget: int = DEFAULT_MATERIALIZATION_BUDGET) -> np.ndarray:
    """All compositions as a ``(K, m)`` int array in lexicographic order."""
    count = reference_point_count(m, p)
    if count > budget:
        raise CapacityError(f"|R_p| = C({p + m - 1},{m - 1}) = {count} exceeds budget {budget}")
    if m == 1:
        return np.array([[p]], dtype=np.int64)
    # stars and bars: bar positions in lexicographic order give compositions in lexicographic order
    bars = np.array(list(itertools.combinations(range(p + m - 1), m - 1)), dtype=np.int64)
    bars = bars.reshape(count, m - 1)
    edges = np.hstack([np.full((count, 1), -1), bars, np.full((count, 1), p + m - 1)])
    return np.diff(edges, axis=1) - 1


def generate_reference_points(m: int, p: int, budget: int = DEFAULT_MATERIALIZATION_BUDGET) -> list[tuple[int, ...]]:
    return [tuple(int(a) for a in row) for row in reference_point_array(m, p, budget)]


def _unit_rows(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    return A / _row_norms(A)[:, None]


def _row_norms(V: np.ndarray) -> np.ndarray:
    sq = V[:, 0] * V[:, 0]
    for k in range(1, V.shape[1]):
        sq = sq + V[:, k] * V[:, k]
    return np.sqrt(sq)


def _distances_to_unit_rays(v: np.ndarray, U: np.ndarray, batched: bool = False) -> np.ndarray:
    # Coordinate-wise loops keep each element's arithmetic independent of how
    # many rows are evaluated, so both association modes agree bit for bit.
    # Unbatched: v is (m,), U is (K, m). Batched: v is (m, N, 1), U is (m, 1, K).
    if not batched:
        U = U.T
    m = U.shape[0]
    dot = U[0] * v[0]
    for k in range(1, m):
        dot = dot + U[k] * v[k]
    r = v[0] - dot * U[0]
    sq = r * r
    for k in range(1, m):
        r = v[k] - dot * U[k]
        sq = sq + r * r
    return np.sqrt(sq)


def ray_distance(v, r) -> float:
    """Perpendicular distance from point ``v`` to the line through 0 and ``r``."""
    v = np.asarray(v, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    if v.shape != r.shape or v.ndim != 1:
        raise InvalidParameterError("v and r must be vectors of equal dimension")
    if not np.any(r):
        raise InvalidParameterError("reference direction must be non-null")
    return float(_distances_to_unit_rays(v, _unit_rows(r[None, :]))[0])


def nearest_simplex_lattice_point(v, p: int) -> tuple[int, ...]:
    """Lattice composition within ``1/p`` (per coordinate) of ``v / sum(v)``.

    Rounds every coordinate down, then rounds up the last ``p - sum(floor)``
    coordinates so the result sums to ``p``.
    """
    v = np.asarray(v, dtype=np.float64)
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    if v.ndim != 1 or np.any(v < 0):
        raise InvalidParameterError("v must be a non-negative vector")
    total = v.sum()
    if total <= 0:
        raise InvalidParameterError("cannot project the zero vector onto the simplex")
    t = v / total
    b = np.floor(t * p).astype(np.int64)
    b = np.clip(b, 0, p)
    short = p - int(b.sum())
    m = v.size
    # floating round-off can push the floor sum a unit outside [p - m, p]
    while short < 0:
        i = int(np.argmax(b - t * p))
        b[i] -= 1
        short += 1
    short = min(short, m)
    if short:
        b[m - short :] += 1
    return tuple(int(a) for a in b)


def _offsets(m: int, radius: int) -> np.ndarray:
    rng = range(-radius, radius + 1)
    offs = np.array([d for d in itertools.product(rng, repeat=m) if sum(d) == 0], dtype=np.int64)
    return offs.reshape(-1, m)


def _pick(comps: np.ndarray, dist: np.ndarray, vnorm: float) -> int:
    """Index of the nearest row; rows must be in lexicographic order."""
    dmin = dist.min()
    return int(np.flatnonzero(dist <= dmin + TIE_RTOL * vnorm)[0])


class Associator:
    """Per-run association of normalized vectors to reference compositions.

    ``mode`` is ``"exhaustive"`` (scan all of R_p), ``"lattice"`` (scan the
    certified ball around ``v``, or an L-infinity box of ``radius`` around the
    rounding construction when ``radius`` is given) or ``"auto"``
    (exhaustive when R_p fits the materialization budget).
    Results are memoized by the exact bytes of the input vector.
    """

    def __init__(self, m: int, p: int, mode: str = "auto", radius: int | None = None,
                 budget: int = DEFAULT_MATERIALIZATION_BUDGET):
        if mode not in MODES:
            raise InvalidParameterError(f"unknown association mode {mode!r}")
        if radius is not None and radius < 1:
            raise InvalidParameterError("lattice radius must be >= 1")
        self.count = reference_point_count(m, p)
        self.m, self.p, self.radius = m, p, radius
        if mode == "auto":
            mode = "exhaustive" if self.count <= budget else "lattice"
        self.mode = mode
        self._cache: dict[bytes, tuple[tuple[int, ...], float]] = {}
        if mode == "exhaustive":
            self._comps = reference_point_array(m, p, budget)
            self._units = _unit_rows(self._comps)
        elif radius is not None:
            self._offsets = _offsets(m, radius)

    def _box_candidates(self, base: np.ndarray) -> np.ndarray:
        cands = base[None, :] + self._offsets
        cands = cands[np.all(cands >= 0, axis=1)]
        return cands[np.lexsort(cands.T[::-1])]

    def _ball_candidates(self, v: np.ndarray, base: np.ndarray) -> np.ndarray:
        m, p = self.m, self.p
        tp = v * (p / v.sum())
        d0 = _distances_to_unit_rays(tp, _unit_rows(base[None, :]))[0]
        reach = math.sqrt(m) * d0 * (1 + 1e-9) + 1e-9
        lo = np.maximum(np.ceil(tp - reach), 0).astype(np.int64)
        hi = np.minimum(np.floor(tp + reach), p).astype(np.int64)
        if m == 1:
            return base[None, :]
        grids = np.meshgrid(*[np.arange(lo[i], hi[i] + 1) for i in range(m - 1)], indexing="ij")
        head = np.stack([g.ravel() for g in grids], axis=1)
        last = p - head.sum(axis=1)
        cands = np.hstack([head, last[:, None]])
        keep = (last >= lo[-1]) & (last <= hi[-1])
        cands = cands[keep]
        gap = cands - tp
        keep = np.einsum("ij,ij->i", gap, gap) <= reach * reach
        cands = cands[keep]
        if not len(cands):
            return base[None, :]
        return cands

    def _candidates(self, v: np.ndarray) -> np.ndarray:
        base = np.array(nearest_simplex_lattice_point(v, self.p), dtype=np.int64)
        if self.radius is not None:
            return self._box_candidates(base)
        return self._ball_candidates(v, base)

    def __call__(self, v) -> tuple[tuple[int, ...], float]:
        v = np.ascontiguousarray(v, dtype=np.float64)
        if v.shape != (self.m,):
            raise InvalidParameterError(f"expected a vector of dimension {self.m}")
        key = v.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        vnorm = float(_row_norms(v[None, :])[0])
        if vnorm == 0.0:
            out = (self._zero_comp(), 0.0)
        else:
            if self.mode == "exhaustive":
                comps, units = self._comps, self._units
            else:
                comps = self._candidates(v)
                units = _unit_rows(comps)
            dist = _distances_to_unit_rays(v, units)
            i = _pick(comps, dist, vnorm)
            out = (tuple(int(a) for a in comps[i]), float(dist[i]))
        self._cache[key] = out
        return out

    def _zero_comp(self) -> tuple[int, ...]:
        return (0,) * (self.m - 1) + (self.p,)

    def associate_many(self, V, chunk: int = 256) -> tuple[list[tuple[int, ...]], np.ndarray]:
        """Associate every row of ``V``; same results as calling row by row."""
        V = np.ascontiguousarray(V, dtype=np.float64)
        if self.mode != "exhaustive":
            pairs = [self(v) for v in V]
            return [c for c, _ in pairs], np.array([d for _, d in pairs])
        comps: list[tuple[int, ...]] = []
        dists = np.empty(len(V))
        U = self._units
        for start in range(0, len(V), chunk):
            B = V[start : start + chunk]
            D = _distances_to_unit_rays(B[:, None, :].transpose(2, 0, 1), U.T[:, None, :], batched=True)
            norms = _row_norms(B)
            dmin = D.min(axis=1)
            idx = np.argmax(D <= (dmin + TIE_RTOL * norms)[:, None], axis=1)
            for r, i in enumerate(idx):
                if norms[r] == 0.0:
                    comps.append(self._zero_comp())
                    dists[start + r] = 0.0
                else:
                    comps.append(tuple(int(a) for a in self._comps[i]))
                    dists[start + r] = D[r, i]
        return comps, dists


def associate(v, m: int, p: int, mode: str = "exhaustive", radius: int | None = None,
              budget: int = DEFAULT_MATERIALIZATION_BUDGET) -> tuple[tuple[int, ...], float]:
    """One-off association; prefer an ``Associator`` inside loops."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (m,):
        raise InvalidParameterError(f"expected a vector of dimension {m}")
    if np.any(v < 0):
        raise InvalidParameterError("normalized vectors must be non-negative")
    return Associator(m, p, mode=mode, radius=radius, budget=budget)(v)
