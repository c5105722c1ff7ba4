import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from nsga3.core import make_rng
from nsga3.errors import CapacityError, InvalidParameterError
from nsga3.refpoints import (Associator, associate, generate_reference_points, nearest_simplex_lattice_point,
                             ray_distance, reference_point_array, reference_point_count)
from oracles import compositions, nearest_compositions_exact, sq_ray_distance_exact


def test_two_objective_lattice():
    assert generate_reference_points(2, 2) == [(0, 2), (1, 1), (2, 0)]


@pytest.mark.parametrize("m,p,count", [(3, 2, 6), (1, 7, 1), (4, 64, 47905), (2, 114, 115)])
def test_counts(m, p, count):
    assert reference_point_count(m, p) == count


def test_single_objective_lattice():
    assert generate_reference_points(1, 5) == [(5,)]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("p", [1, 2, 3, 7, 12])
def test_lattice_matches_recursive_enumeration(m, p):
    comps = generate_reference_points(m, p)
    assert comps == compositions(m, p)
    assert len(comps) == reference_point_count(m, p) == math.comb(p + m - 1, m - 1)


def test_materialization_budget():
    with pytest.raises(CapacityError):
        reference_point_array(6, 100)


@pytest.mark.parametrize("m,p", [(0, 3), (2, 0)])
def test_invalid_lattice_parameters(m, p):
    with pytest.raises(InvalidParameterError):
        reference_point_count(m, p)


@pytest.mark.parametrize("v,r,expected", [((2, 4), (1, 2), 0.0), ((1, 0), (0, 1), 1.0), ((1, 1), (1, 0), 1.0)])
def test_ray_distance_examples(v, r, expected):
    assert ray_distance(v, r) == pytest.approx(expected, abs=1e-15)


def test_ray_distance_null_direction():
    with pytest.raises(InvalidParameterError):
        ray_distance((1, 1), (0, 0))


@pytest.mark.parametrize("mode", ["exhaustive", "lattice"])
def test_association_examples(mode):
    assert associate((1, 0), 2, 2, mode=mode) == ((2, 0), 0.0)
    assert associate((0, 0, 0), 3, 4, mode=mode)[0] == (0, 0, 4)
    assert associate((0.6, 0.4), 2, 2, mode=mode)[0] == (1, 1)


def test_association_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        associate((1, 2, 3), 2, 3)
    with pytest.raises(InvalidParameterError):
        associate((-0.1, 0.5), 2, 3)
    with pytest.raises(InvalidParameterError):
        Associator(2, 3, mode="nearest")


def test_exact_ties_go_to_lexicographically_smallest():
    # (1, 1) sits exactly between the rays through (1,2)/3 and (2,1)/3 when p = 3
    assert associate((1, 1), 2, 3) == associate((1, 1), 2, 3, mode="lattice")
    assert associate((1, 1), 2, 3)[0] == (1, 2)


@given(st.integers(2, 4).flatmap(lambda m: st.tuples(st.just(m), st.lists(st.integers(0, 20), min_size=m, max_size=m))),
       st.integers(1, 12))
def test_association_agrees_with_exact_rational_oracle(mv, p):
    m, v = mv
    assume(any(v))
    best = nearest_compositions_exact(v, p)
    for mode in ("exhaustive", "lattice"):
        comp, dist = associate(np.array(v, dtype=float), m, p, mode=mode)
        assert comp == best[0]
        assert dist == pytest.approx(math.sqrt(sq_ray_distance_exact(v, comp)), rel=1e-12, abs=1e-12)


@given(st.integers(2, 4), st.integers(1, 30), st.integers(0, 2**32))
def test_association_modes_agree(m, p, seed):
    V = make_rng(seed).random((50, m))
    V[::7] = np.round(V[::7] * 3) / 3  # plant exact ties
    ex = Associator(m, p, "exhaustive")
    la = Associator(m, p, "lattice")
    assert [ex(v) for v in V] == [la(v) for v in V]


@given(st.integers(2, 4), st.integers(1, 20), st.integers(0, 2**32))
def test_batched_association_matches_single(m, p, seed):
    V = make_rng(seed).random((40, m))
    V[5] = 0
    a = Associator(m, p, "exhaustive")
    comps, dists = a.associate_many(V, chunk=16)
    single = [Associator(m, p, "exhaustive")(v) for v in V]
    assert comps == [c for c, _ in single]
    assert dists.tolist() == [d for _, d in single]


def test_lattice_box_heuristic_runs():
    a = Associator(3, 10, "lattice", radius=1)
    assert sum(a((0.2, 0.3, 0.5))[0]) == 10
    with pytest.raises(InvalidParameterError):
        Associator(3, 10, "lattice", radius=0)


def test_auto_mode_switches_on_budget():
    assert Associator(4, 64, "auto").mode == "exhaustive"
    assert Associator(4, 64, "auto", budget=1000).mode == "lattice"


def test_lattice_point_examples():
    assert nearest_simplex_lattice_point((0.25, 0.75), 4) == (1, 3)
    a = nearest_simplex_lattice_point((0.3, 0.7), 2)
    assert sum(a) == 2 and abs(0.3 - a[0] / 2) <= 0.5 and abs(0.7 - a[1] / 2) <= 0.5


def test_lattice_point_rejects_zero():
    with pytest.raises(InvalidParameterError):
        nearest_simplex_lattice_point((0, 0), 3)


@given(st.integers(1, 6).flatmap(lambda m: st.lists(st.floats(0, 1e3), min_size=m, max_size=m)),
       st.integers(1, 200))
def test_lattice_point_within_one_over_p(v, p):
    v = np.array(v)
    assume(v.sum() > 1e-9)
    a = np.array(nearest_simplex_lattice_point(v, p))
    assert a.sum() == p and a.min() >= 0
    t = v / v.sum()
    assert np.max(np.abs(t - a / p)) <= 1 / p + 1e-12


@given(st.integers(2, 5).flatmap(lambda m: st.lists(st.floats(0, 1), min_size=m, max_size=m)),
       st.integers(1, 40))
def test_parallel_vectors_have_zero_distance(v, p):
    v = np.array(v)
    assume(v.sum() > 1e-6)
    assert ray_distance(3.5 * v, v) <= 1e-12 * np.linalg.norm(v) * 3.5 + 1e-15
