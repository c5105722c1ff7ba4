import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nsga3.core import bitstring
from nsga3.dominance import all_bitstrings, nondominated_sort
from nsga3.errors import CapacityError, InvalidParameterError
from nsga3.objectives import (Kind, Problem, evaluate, evaluate_population, f_max, is_pareto_optimal,
                              pareto_front_fitness_set, pareto_front_size)
from oracles import EVALUATORS


@pytest.mark.parametrize("kind,m,n,x,expected", [
    ("lotz", 2, 4, "1101", (2, 0)),
    ("lotz", 4, 8, "11000101", (2, 2, 0, 0)),
    ("omm", 2, 4, "1101", (3, 1)),
    ("cocz", 2, 4, "1110", (3, 3)),
    ("cocz", 4, 8, "11011001", (4, 4, 4, 4)),
    ("omm3", 3, 4, "1100", (2, 2, 0)),
])
def test_hand_evaluated_examples(kind, m, n, x, expected):
    assert evaluate(bitstring(x), Problem(kind, m, n)) == expected


@pytest.mark.parametrize("m,n", [(2, 6), (4, 8), (6, 12)])
def test_all_zeros_on_omm(m, n):
    b = 2 * n // m
    assert evaluate(np.zeros(n, dtype=np.uint8), Problem("omm", m, n)) == (0, b) * (m // 2)


@pytest.mark.parametrize("m,n", [(2, 6), (4, 8), (6, 12)])
def test_all_ones_on_lotz(m, n):
    b = 2 * n // m
    assert evaluate(np.ones(n, dtype=np.uint8), Problem("lotz", m, n)) == (b, 0) * (m // 2)


@pytest.mark.parametrize("kind,m,n", [
    ("lotz", 2, 8), ("lotz", 4, 8), ("lotz", 6, 9), ("omm", 2, 7), ("omm", 4, 10),
    ("cocz", 2, 8), ("cocz", 4, 8), ("cocz", 6, 12), ("omm3", 3, 8),
])
def test_vectorized_evaluation_matches_definition(kind, m, n):
    d = Problem(kind, m, n)
    X = all_bitstrings(n)
    got = evaluate_population(X, d)
    want = np.array([EVALUATORS[kind]([int(b) for b in x], m) for x in X])
    assert np.array_equal(got, want)


@pytest.mark.parametrize("kind,m,n", [
    ("lotz", 4, 5), ("omm", 3, 6), ("cocz", 2, 7), ("cocz", 3, 6), ("omm3", 4, 4), ("omm3", 3, 5),
    ("lotz", 4, 7), ("omm", 2, 0),
])
def test_invalid_descriptors(kind, m, n):
    with pytest.raises(InvalidParameterError):
        Problem(kind, m, n)


def test_length_mismatch():
    with pytest.raises(InvalidParameterError):
        evaluate(bitstring("101"), Problem("omm", 2, 4))


@pytest.mark.parametrize("kind,m,n,expected", [
    ("lotz", 2, 20, 20), ("cocz", 2, 20, 20), ("omm", 4, 8, 4), ("omm3", 3, 10, 10), ("cocz", 4, 8, 6),
])
def test_f_max(kind, m, n, expected):
    assert f_max(Problem(kind, m, n)) == expected


@pytest.mark.parametrize("kind,m,n,x,expected", [
    ("lotz", 2, 4, "1100", True), ("lotz", 2, 4, "1011", False),
    ("cocz", 2, 4, "1010", False), ("cocz", 2, 4, "1110", True),
    ("omm", 2, 4, "0110", True),
])
def test_pareto_optimality_examples(kind, m, n, x, expected):
    assert is_pareto_optimal(bitstring(x), Problem(kind, m, n)) is expected


def test_small_fronts():
    assert pareto_front_fitness_set(Problem("lotz", 2, 4)) == {(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)}
    assert pareto_front_fitness_set(Problem("cocz", 2, 4)) == {(4, 2), (3, 3), (2, 4)}
    assert len(pareto_front_fitness_set(Problem("omm", 4, 8))) == 25


def test_front_budget():
    with pytest.raises(CapacityError):
        pareto_front_fitness_set(Problem("omm", 8, 40), budget=10**4)


SMALL = [("lotz", 2, 6), ("lotz", 4, 8), ("lotz", 6, 12), ("omm", 2, 9), ("omm", 4, 10),
         ("cocz", 2, 10), ("cocz", 4, 8), ("cocz", 4, 12), ("omm3", 3, 10)]


@pytest.mark.parametrize("kind,m,n", SMALL)
def test_exhaustive_front_matches_closed_form(kind, m, n):
    # brute force: the non-dominated fitness vectors of the whole image
    d = Problem(kind, m, n)
    X = all_bitstrings(n)
    F = evaluate_population(X, d)
    U = np.unique(F, axis=0)
    front = {tuple(int(a) for a in U[i]) for i in nondominated_sort(U)[0]}
    assert front == pareto_front_fitness_set(d)
    assert len(front) == pareto_front_size(d)
    assert F.min() >= 0 and F.max() <= d.f_max
    optimal = np.array([is_pareto_optimal(x, d) for x in X])
    assert {tuple(int(a) for a in f) for f in F[optimal]} == front
    assert all(tuple(int(a) for a in f) in front or not o for f, o in zip(F, optimal))


@pytest.mark.parametrize("kind,m,n", [k for k in SMALL if k[0] in ("lotz", "omm")])
def test_block_pairs_of_optimal_points_sum_to_block_size(kind, m, n):
    d = Problem(kind, m, n)
    X = all_bitstrings(n)
    F = evaluate_population(X, d)
    opt = np.array([is_pareto_optimal(x, d) for x in X])
    assert np.all(F[opt][:, 0::2] + F[opt][:, 1::2] == d.block_size)


@given(st.sampled_from([(2, 8), (4, 8), (4, 16), (6, 12)]), st.data())
def test_cocz_objective_sum_depends_only_on_first_half(mn, data):
    m, n = mn
    x = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), dtype=np.uint8)
    head = int(x[: n // 2].sum())
    assert sum(evaluate(x, Problem(Kind.COCZ, m, n))) == m * head + (m // 2) * (n // m)


@given(st.sampled_from(SMALL), st.data())
def test_values_in_range(case, data):
    kind, m, n = case
    d = Problem(kind, m, n)
    x = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), dtype=np.uint8)
    assert all(0 <= v <= d.f_max for v in evaluate(x, d))
    assert evaluate(x, d) == EVALUATORS[kind]([int(b) for b in x], m)
