"""Reference-point niching survival selection.

Random draws, in order, per loop iteration:

1. one ``rng.integers`` over the rho-minimal active reference points
   (kept in lexicographic order), then
2. if that point still has unselected critical-layer members, one
   ``rng.integers`` over those at minimal ray distance, ordered by
   (distance, index).

A draw is made even when there is a single option, so the stream position
depends only on the number of iterations.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from collections.abc import Sequence

import numpy as np

from .core import RandomStream
from .errors import InvalidStateError
from .refpoints import TIE_RTOL


def select(Y: Sequence[int], F_crit: Sequence[int], mu: int, comps: dict, dists: dict,
           rng: RandomStream, faithful: bool = False, reference_points=None,
           audit: list | None = None) -> list[int]:
    """Choose ``mu - len(Y)`` members of the critical layer.

    ``comps[i]`` / ``dists[i]`` give the associated composition and ray
    distance of individual ``i`` for every ``i`` in ``Y`` and ``F_crit``.
    With ``faithful`` the active set starts as the full ``reference_points``
    (all of R_p); otherwise it starts as the compositions that have at least
    one associated member, which yields the same selection distribution.
    """
    need = mu - len(Y)
    if not 0 < need <= len(F_crit):
        raise InvalidStateError(f"cannot select {need} of {len(F_crit)} critical members (|Y|={len(Y)}, mu={mu})")

    rho: dict = defaultdict(int)
    for i in Y:
        rho[comps[i]] += 1
    pool: dict = defaultdict(list)
    for i in F_crit:
        pool[comps[i]].append((dists[i], i))
    for members in pool.values():
        members.sort()

    if faithful:
        if reference_points is None:
            raise InvalidStateError("faithful selection needs the materialized reference points")
        active = [tuple(r) for r in reference_points]
    else:
        active = sorted(set(rho) | set(pool))

    # buckets[k] holds the active points with rho == k, in lexicographic order
    buckets: dict[int, list] = defaultdict(list)
    for r in active:
        buckets[rho[r]].append(r)
    for b in buckets.values():
        b.sort()

    chosen: list[int] = []
    level = min(buckets) if buckets else 0
    while True:
        while not buckets.get(level):
            buckets.pop(level, None)
            if not buckets:
                raise InvalidStateError("ran out of reference points before filling the population")
            level = min(buckets)
        ties = buckets[level]
        r_min = ties.pop(int(rng.integers(len(ties))))
        members = pool.get(r_min)
        if not members:
            continue  # point leaves R'
        dmin = members[0][0]
        k = 1
        while k < len(members) and members[k][0] <= dmin + TIE_RTOL * max(1.0, dmin):
            k += 1
        d, i = members.pop(int(rng.integers(k)))
        chosen.append(i)
        if audit is not None:
            audit.append({"reference": list(r_min), "rho": level, "index": int(i), "distance": float(d)})
        if len(chosen) == need:
            return chosen
        bisect.insort(buckets[level + 1], r_min)


def survivors(Y: Sequence[int], F_crit: Sequence[int], mu: int, comps: dict, dists: dict,
              rng: RandomStream, **kwargs) -> np.ndarray:
    """Indices forming the next population: all of ``Y`` plus the selected critical members."""
    picked = select(Y, F_crit, mu, comps, dists, rng, **kwargs)
    return np.concatenate([np.asarray(Y, dtype=np.int64), np.asarray(picked, dtype=np.int64)])
