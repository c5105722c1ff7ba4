"""Bitstring genotypes, seeded randomness and the variation operators.

A bitstring is a 1-D ``numpy.uint8`` array of 0/1 values; a population is a
2-D array of shape ``(mu, n)``. Objective formulas elsewhere use 1-indexed
bit positions, which map to ``x[i - 1]`` here.

All randomness flows through a ``numpy.random.Generator`` backed by Philox,
a counter-based bit generator. The same seed gives the same draws.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import InvalidParameterError, InvalidStateError

RandomStream = np.random.Generator

_MASK64 = (1 << 64) - 1


def make_rng(seed: int) -> RandomStream:
    """Return a reproducible stream for a 64-bit unsigned seed."""
    if not 0 <= int(seed) <= _MASK64:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(int(seed)))


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, index: int) -> int:
    """Derive an independent per-trial seed from a base seed and trial index."""
    return splitmix64((splitmix64(int(base_seed) & _MASK64) + int(index)) & _MASK64)


def bitstring(text: str) -> np.ndarray:
    """Parse ``"1101"`` into a bit array."""
    if not text or set(text) - {"0", "1"}:
        raise InvalidParameterError(f"not a bitstring: {text!r}")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


def to_str(x: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in x)


def _check_rate(rate: float) -> None:
    if not 0.0 <= rate <= 1.0:
        raise InvalidParameterError(f"mutation rate must lie in [0, 1], got {rate}")


def standard_bit_mutation(parent: np.ndarray, rate: float, rng: RandomStream) -> np.ndarray:
    """Flip every bit independently with probability ``rate``.

    Draws exactly ``n`` uniforms; the parent is left untouched.
    """
    _check_rate(rate)
    parent = np.asarray(parent, dtype=np.uint8)
    if parent.ndim != 1 or parent.size < 1:
        raise InvalidParameterError("parent must be a non-empty 1-D bitstring")
    flips = rng.random(parent.size) < rate
    return parent ^ flips.astype(np.uint8)


def mutate_population(parents: np.ndarray, rate: float, rng: RandomStream) -> np.ndarray:
    """Row-wise standard bit mutation; draws ``parents.size`` uniforms in row-major order."""
    _check_rate(rate)
    flips = rng.random(parents.shape) < rate
    return parents ^ flips.astype(np.uint8)


def uniform_parent_selection(population: Sequence[np.ndarray] | np.ndarray, rng: RandomStream) -> np.ndarray:
    if len(population) == 0:
        raise InvalidStateError("cannot select a parent from an empty population")
    return population[int(rng.integers(len(population)))]


def random_population(mu: int, n: int, rng: RandomStream) -> np.ndarray:
    """``mu`` bitstrings of length ``n`` with independent fair-coin bits."""
    if mu < 1 or n < 1:
        raise InvalidParameterError(f"need mu >= 1 and n >= 1, got mu={mu}, n={n}")
    return rng.integers(0, 2, size=(mu, n), dtype=np.uint8)
