"""NSGA-III on bitstring benchmarks with per-generation invariant checks."""

from .core import make_rng, standard_bit_mutation, trial_seed, uniform_parent_selection, random_population
from .dominance import critical_index, dominates, max_antichain_size, nondominated_sort, weakly_dominates
from .engine import NSGA3, RunConfig, RunRecord, derive_theorem_parameters, run, run_until_covered
from .errors import CapacityError, InvalidParameterError, InvalidStateError, InvariantViolation
from .normalization import NormalizationState, hyperplane_intercepts, nadir_estimate, normalize
from .objectives import Kind, Problem, evaluate, f_max, is_pareto_optimal, pareto_front_fitness_set
from .refpoints import associate, generate_reference_points, ray_distance, reference_point_count
from .selection import select

__version__ = "0.1.0"

__all__ = [
    "NSGA3", "RunConfig", "RunRecord", "derive_theorem_parameters", "run", "run_until_covered",
    "Kind", "Problem", "evaluate", "f_max", "is_pareto_optimal", "pareto_front_fitness_set",
    "critical_index", "dominates", "max_antichain_size", "nondominated_sort", "weakly_dominates",
    "NormalizationState", "hyperplane_intercepts", "nadir_estimate", "normalize",
    "associate", "generate_reference_points", "ray_distance", "reference_point_count",
    "make_rng", "standard_bit_mutation", "trial_seed", "uniform_parent_selection", "random_population",
    "select",
    "CapacityError", "InvalidParameterError", "InvalidStateError", "InvariantViolation",
]
