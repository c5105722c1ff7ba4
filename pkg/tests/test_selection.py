from collections import Counter

import numpy as np
import pytest

from nsga3.core import make_rng
from nsga3.dominance import critical_index, nondominated_sort
from nsga3.errors import InvalidStateError
from nsga3.normalization import NormalizationState, normalize_generation
from nsga3.refpoints import Associator, generate_reference_points
from nsga3.selection import select, survivors


def test_exact_fit_takes_the_whole_critical_layer():
    comps = {0: (1, 0), 1: (0, 1), 2: (1, 0), 3: (0, 1)}
    dists = dict.fromkeys(comps, 0.0)
    assert sorted(select([0], [1, 2, 3], 4, comps, dists, make_rng(0))) == [1, 2, 3]


def test_single_point_serves_by_distance():
    comps = dict.fromkeys(range(5), (1, 1))
    dists = {0: 0.4, 1: 0.1, 2: 0.3, 3: 0.0, 4: 0.2}
    for seed in range(20):
        assert select([], list(range(5)), 4, comps, dists, make_rng(seed)) == [3, 1, 4, 2]


def test_least_crowded_point_wins():
    comps = {0: (0, 2), 1: (0, 2), 2: (2, 0), 3: (2, 0)}
    dists = {0: 0.0, 1: 0.5, 2: 0.3, 3: 0.1}
    for seed in range(20):
        assert select([0], [1, 2, 3], 2, comps, dists, make_rng(seed)) == [3]


def test_precondition():
    comps = {0: (1, 0), 1: (0, 1)}
    dists = dict.fromkeys(comps, 0.0)
    with pytest.raises(InvalidStateError):
        select([0], [1], 3, comps, dists, make_rng(0))
    with pytest.raises(InvalidStateError):
        select([0], [1], 1, comps, dists, make_rng(0))


def test_faithful_mode_needs_the_lattice():
    comps = {0: (1, 0), 1: (0, 1)}
    with pytest.raises(InvalidStateError):
        select([], [0, 1], 1, comps, dict.fromkeys(comps, 0.0), make_rng(0), faithful=True)


def _generation(F, mu, p, seed, faithful=False):
    F = np.array(F)
    layers = nondominated_sort(F)
    i_star = critical_index([len(L) for L in layers], mu)
    _, norm = normalize_generation(NormalizationState(max(1, int(F.max()))), F, layers, i_star)
    assoc = Associator(F.shape[1], p)
    Y = np.concatenate(layers[: i_star - 1]) if i_star > 1 else np.empty(0, dtype=np.int64)
    crit = layers[i_star - 1]
    ranked = np.concatenate([Y, crit])
    pairs = {int(i): assoc(norm(F[i])) for i in ranked}
    comps = {i: c for i, (c, _) in pairs.items()}
    dists = {i: d for i, (_, d) in pairs.items()}
    ref = generate_reference_points(F.shape[1], p) if faithful else None
    return survivors(Y.tolist(), crit.tolist(), mu, comps, dists, make_rng(seed),
                     faithful=faithful, reference_points=ref)


def test_dominated_member_never_survives():
    F = [(4, 0), (0, 4), (2, 2), (1, 1)]
    seen = Counter()
    for seed in range(200):
        chosen = _generation(F, 2, 23, seed)
        assert len(chosen) == 2 and 3 not in chosen
        seen[tuple(sorted(chosen))] += 1
    assert set(seen) <= {(0, 1), (0, 2), (1, 2)}


def test_identical_fitness_keeps_the_multiset():
    F = [(2, 2)] * 6
    chosen = _generation(F, 3, 8, 1)
    assert len(chosen) == 3 and len(set(chosen)) == 3


def test_one_slot_left():
    F = [(5, 0), (0, 5), (3, 3), (1, 1)]
    assert sorted(_generation(F, 4, 10, 0)) == [0, 1, 2, 3]


def test_faithful_and_sparse_selection_share_a_distribution():
    F = [(6, 0), (5, 1), (4, 2), (3, 3), (2, 4), (1, 5), (0, 6), (3, 3), (4, 2)]
    trials = 6000
    sparse = Counter(tuple(sorted(_generation(F, 4, 3, s))) for s in range(trials))
    full = Counter(tuple(sorted(_generation(F, 4, 3, s, faithful=True))) for s in range(trials))
    keys = set(sparse) | set(full)
    tv = 0.5 * sum(abs(sparse[k] - full[k]) for k in keys) / trials
    assert len(keys) > 1
    assert tv < 0.05


def test_audit_records_every_pick():
    comps = dict.fromkeys(range(4), (1, 1))
    dists = {i: i / 10 for i in range(4)}
    audit = []
    select([], [0, 1, 2, 3], 3, comps, dists, make_rng(0), audit=audit)
    assert [a["index"] for a in audit] == [0, 1, 2]
    assert [a["rho"] for a in audit] == [0, 1, 2]


def test_every_iteration_draws_twice():
    # the stream position after selection depends only on the number of picks
    comps = {0: (2, 0), 1: (0, 2), 2: (1, 1)}
    dists = dict.fromkeys(comps, 0.0)
    rng = make_rng(3)
    select([], [0, 1, 2], 2, comps, dists, rng)
    ref = make_rng(3)
    ref.integers(3), ref.integers(1), ref.integers(2), ref.integers(1)
    assert rng.random() == ref.random()
