"""Pareto dominance (maximization), non-dominated sorting and an exact
maximum-antichain oracle over the image of a benchmark."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import CapacityError, InvalidParameterError, InvalidStateError
from .objectives import Problem, evaluate_population

DEFAULT_EXHAUSTION_BUDGET = 2**16


def _pair(u, v):
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise InvalidParameterError(f"fitness vectors must have equal length, got {u.shape} and {v.shape}")
    return u, v


def weakly_dominates(u, v) -> bool:
    u, v = _pair(u, v)
    return bool(np.all(u >= v))


def dominates(u, v) -> bool:
    u, v = _pair(u, v)
    return bool(np.all(u >= v) and np.any(u > v))


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is true iff row ``i`` dominates row ``j``."""
    F = np.asarray(F)
    ge = np.all(F[:, None, :] >= F[None, :, :], axis=2)
    gt = np.any(F[:, None, :] > F[None, :, :], axis=2)
    return ge & gt


def nondominated_sort(fitnesses: Sequence | np.ndarray) -> list[np.ndarray]:
    """Partition row indices into layers F1, F2, ... (fast non-dominated sort).

    Each layer is an ascending index array. Equal fitness vectors never
    dominate each other, so duplicates always share a layer.
    """
    F = np.asarray(fitnesses)
    if F.ndim != 2 or F.shape[0] == 0:
        raise InvalidParameterError("nondominated_sort needs a non-empty (N, m) array")
    D = dominance_matrix(F).astype(np.int32)
    remaining = D.sum(axis=0)
    layers = []
    current = np.flatnonzero(remaining == 0)
    while current.size:
        layers.append(current)
        remaining = remaining - D[current].sum(axis=0)
        remaining[current] = -1
        current = np.flatnonzero(remaining == 0)
    return layers


def critical_index(layer_sizes: Sequence[int], mu: int) -> int:
    """1-based index i* of the layer that straddles ``mu``.

    Accepts either layer sizes or the layers themselves.
    """
    sizes = [s if isinstance(s, (int, np.integer)) else len(s) for s in layer_sizes]
    if mu < 1:
        raise InvalidParameterError(f"mu must be >= 1, got {mu}")
    total = 0
    for i, s in enumerate(sizes, start=1):
        total += s
        if total >= mu:
            return i
    raise InvalidStateError(f"layers hold {total} members, fewer than mu={mu}")


def all_bitstrings(n: int) -> np.ndarray:
    return ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def image(d: Problem, budget: int = DEFAULT_EXHAUSTION_BUDGET) -> np.ndarray:
    """Distinct fitness vectors of ``d`` over all of ``{0,1}^n``, sorted."""
    if 2**d.n > budget:
        raise CapacityError(f"2^{d.n} search points exceed the exhaustion budget {budget}")
    return np.unique(evaluate_population(all_bitstrings(d.n), d), axis=0)


def _max_clique(adj: list[int]) -> int:
    # Branch and bound with a greedy-colouring bound (Tomita & Seki style).
    best = 0

    def colour_sort(cand):
        order, bounds = [], []
        colour = 0
        uncoloured = cand
        while uncoloured:
            colour += 1
            q = uncoloured
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low & ~adj[v]
                uncoloured &= ~low
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(size, cand):
        nonlocal best
        order, bounds = colour_sort(cand)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if size + bound <= best:
                return
            nxt = cand & adj[v]
            if nxt:
                expand(size + 1, nxt)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    if adj:
        expand(0, (1 << len(adj)) - 1)
    return best


def max_antichain_size_of(vectors: np.ndarray) -> int:
    """Largest set of pairwise incomparable vectors among distinct ``vectors``."""
    V = np.unique(np.asarray(vectors), axis=0)
    ge = np.all(V[:, None, :] >= V[None, :, :], axis=2)
    comparable = ge | ge.T
    adj = []
    for i in range(len(V)):
        mask = 0
        for j in np.flatnonzero(~comparable[i]):
            mask |= 1 << int(j)
        adj.append(mask)
    return _max_clique(adj)


def max_antichain_size(d: Problem, budget: int = DEFAULT_EXHAUSTION_BUDGET) -> int:
    """Exact size of a maximum set of mutually incomparable solutions of ``d``."""
    return max_antichain_size_of(image(d, budget))
