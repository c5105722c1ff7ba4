"""Pseudo-Boolean benchmark families: m-LOTZ, m-OMM, m-COCZ and 3-OMM.

All problems are maximized. Blocks are contiguous slices of the bitstring:

* LOTZ / OMM: ``m/2`` blocks of length ``2n/m``; objective ``2i-1`` rewards
  ones (leading ones for LOTZ), objective ``2i`` rewards zeros (trailing
  zeros for LOTZ) of block ``i``.
* COCZ: the first half counts ones into every objective; the second half
  is split into ``m/2`` blocks of length ``n/m`` scored like OMM.
* OMM3: ``(zeros, ones in first half, ones in second half)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidParameterError

DEFAULT_FRONT_BUDGET = 10**7


class Kind(str, enum.Enum):
    LOTZ = "lotz"
    OMM = "omm"
    COCZ = "cocz"
    OMM3 = "omm3"


@dataclass(frozen=True)
class Problem:
    """A benchmark instance: family, objective count ``m`` and length ``n``."""

    kind: Kind
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        m, n = self.m, self.n
        if n < 1 or m < 1:
            raise InvalidParameterError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
        if self.kind is Kind.OMM3:
            if m != 3:
                raise InvalidParameterError("omm3 has exactly 3 objectives")
            if n % 2:
                raise InvalidParameterError(f"omm3 needs even n, got n={n}")
            return
        if m % 2:
            raise InvalidParameterError(f"{self.kind.value} needs an even number of objectives, got m={m}")
        if self.kind is Kind.COCZ:
            if n % m:
                raise InvalidParameterError(f"cocz needs n divisible by m, got n={n}, m={m}")
        elif n % (m // 2):
            raise InvalidParameterError(f"{self.kind.value} needs n divisible by m/2, got n={n}, m={m}")

    @property
    def block_size(self) -> int:
        if self.kind is Kind.COCZ:
            return self.n // self.m
        if self.kind is Kind.OMM3:
            return self.n // 2
        return 2 * self.n // self.m

    @property
    def f_max(self) -> int:
        return f_max(self)

    def __str__(self):
        return f"{self.m}-{self.kind.value.upper()}(n={self.n})"


def f_max(d: Problem) -> int:
    """Largest value any single objective attains over ``{0,1}^n``."""
    if d.kind in (Kind.LOTZ, Kind.OMM):
        return 2 * d.n // d.m
    if d.kind is Kind.COCZ:
        return d.n // 2 + d.n // d.m
    return d.n


def _as_matrix(X, d: Problem) -> np.ndarray:
    X = np.asarray(X, dtype=np.uint8)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != d.n:
        raise InvalidParameterError(f"expected bitstrings of length {d.n}, got shape {X.shape}")
    return X


def _leading_ones(blocks: np.ndarray) -> np.ndarray:
    return np.cumprod(blocks, axis=-1).sum(axis=-1)


def _trailing_zeros(blocks: np.ndarray) -> np.ndarray:
    return np.cumprod(1 - blocks[..., ::-1], axis=-1).sum(axis=-1)


def evaluate_population(X, d: Problem) -> np.ndarray:
    """Fitness matrix of shape ``(N, m)`` for an ``(N, n)`` array of bitstrings."""
    X = _as_matrix(X, d).astype(np.int64)
    N = X.shape[0]
    out = np.empty((N, d.m), dtype=np.int64)
    if d.kind is Kind.OMM3:
        h = d.n // 2
        out[:, 0] = d.n - X.sum(axis=1)
        out[:, 1] = X[:, :h].sum(axis=1)
        out[:, 2] = X[:, h:].sum(axis=1)
        return out

    k = d.m // 2
    b = d.block_size
    if d.kind is Kind.COCZ:
        base = X[:, : d.n // 2].sum(axis=1)
        blocks = X[:, d.n // 2 :].reshape(N, k, b)
    else:
        base = 0
        blocks = X.reshape(N, k, b)

    if d.kind is Kind.LOTZ:
        out[:, 0::2] = _leading_ones(blocks)
        out[:, 1::2] = _trailing_zeros(blocks)
    else:
        ones = blocks.sum(axis=2)
        out[:, 0::2] = ones
        out[:, 1::2] = b - ones
    if d.kind is Kind.COCZ:
        out += base[:, None]
    return out


def evaluate(x, d: Problem) -> tuple[int, ...]:
    """Fitness vector of a single bitstring."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise InvalidParameterError("evaluate expects a single 1-D bitstring")
    return tuple(int(v) for v in evaluate_population(x, d)[0])


def is_pareto_optimal(x, d: Problem) -> bool:
    x = _as_matrix(x, d)[0]
    if d.kind in (Kind.OMM, Kind.OMM3):
        return True
    if d.kind is Kind.COCZ:
        return bool(x[: d.n // 2].all())
    # 1^i 0^(b-i) per block <=> leading ones + trailing zeros span the block
    f = evaluate_population(x, d)[0]
    return bool(np.all(f[0::2] + f[1::2] == d.block_size))


def pareto_front_size(d: Problem) -> int:
    """Closed-form number of Pareto-optimal fitness vectors."""
    if d.kind is Kind.OMM3:
        return (d.n // 2 + 1) ** 2
    return (d.block_size + 1) ** (d.m // 2)


def pareto_front_fitness_set(d: Problem, budget: int = DEFAULT_FRONT_BUDGET) -> set[tuple[int, ...]]:
    """Every Pareto-optimal fitness vector of ``d``.

    Raises ``CapacityError`` when the front has more than ``budget`` vectors.
    """
    size = pareto_front_size(d)
    if size > budget:
        raise CapacityError(f"Pareto front of {d} has {size} vectors, budget is {budget}")
    if d.kind is Kind.OMM3:
        h = d.n // 2
        return {(d.n - a - b, a, b) for a in range(h + 1) for b in range(h + 1)}
    b = d.block_size
    offset = d.n // 2 if d.kind is Kind.COCZ else 0
    front = set()
    for ones in itertools.product(range(b + 1), repeat=d.m // 2):
        v = []
        for i in ones:
            v.extend((offset + i, offset + b - i))
        front.add(tuple(v))
    return front
