"""The NSGA-III generation loop, theorem-mode parameters and run records."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import make_rng, mutate_population, random_population
from .dominance import critical_index, nondominated_sort
from .errors import InvalidParameterError, InvariantViolation
from .normalization import NormalizationState, normalize_generation
from .objectives import Kind, Problem, evaluate_population, pareto_front_fitness_set
from .refpoints import Associator, reference_point_array
from .selection import select

SCHEMA_VERSION = 1

CHECKS = (
    "cardinality",     # |P_{t+1}| = mu
    "normalization",   # normalized R_t lies in [0,1]^m and y_nad - y_min <= f_max
    "same_reference",  # distinct first-layer fitness vectors never share a reference point
    "survival",        # every first-layer fitness vector reappears in P_{t+1}
    "dominance",       # weak dominance is identical before and after normalization
    "coverage",        # covered Pareto-front vectors never leave the population
    "potential",       # LOTZ: max objective sum over the population never decreases
)


def _ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def derive_theorem_parameters(problem: Problem) -> tuple[int, int, int]:
    """``(mu, p, eps_nad)`` at the smallest values the runtime theorems allow.

    ``p`` is the least integer with ``p >= 2 m^(3/2) f_max`` (computed exactly
    as ``p^2 >= 4 m^3 f_max^2``), which for LOTZ/OMM equals ``4 n sqrt(m)``.
    """
    m, n, fm = problem.m, problem.n, problem.f_max
    if problem.kind is Kind.LOTZ:
        mu = (2 * n // m + 1) ** (m - 1)
    elif problem.kind is Kind.OMM:
        mu = (2 * n // m + 1) ** (m // 2)
    elif problem.kind is Kind.COCZ:
        mu = (n // m + 1) ** (m // 2)
    else:
        mu = (n // 2 + 1) ** 2
    p = _ceil_sqrt(4 * m**3 * fm**2)
    return mu, p, fm


def theorem_generation_bound(problem: Problem) -> int:
    """Generation budget the acceptance runs hold each family to."""
    n = problem.n
    if problem.kind is Kind.LOTZ:
        bound = 6 * n * n
    elif problem.kind is Kind.COCZ:
        bound = math.ceil(40 * (n / 2) * math.log(n / 2)) if n > 2 else 1
    else:
        bound = math.ceil(16 * n * math.log(n)) if n > 1 else 1
    return max(bound, 1)


@dataclass
class RunConfig:
    problem: Problem
    mu: int
    p: int
    eps_nad: float
    seed: int = 0
    max_generations: int | None = None
    checks: tuple[str, ...] = ()
    strict_checks: bool = True
    association: str = "auto"
    lattice_radius: int | None = None
    faithful: bool = False
    stop_on_coverage: bool = True
    trace: bool = False
    audit: bool = False

    def __post_init__(self):
        if self.mu < 1 or self.p < 1:
            raise InvalidParameterError(f"need mu >= 1 and p >= 1, got mu={self.mu}, p={self.p}")
        if not self.eps_nad > 0:
            raise InvalidParameterError(f"eps_nad must be positive, got {self.eps_nad}")
        if self.max_generations is None:
            self.max_generations = 10 * theorem_generation_bound(self.problem)
        if self.max_generations < 1:
            raise InvalidParameterError("max_generations must be >= 1")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise InvalidParameterError(f"unknown checks: {sorted(unknown)}")
        self.checks = tuple(self.checks)

    @classmethod
    def theorem(cls, problem: Problem, seed: int = 0, **kwargs) -> RunConfig:
        mu, p, eps = derive_theorem_parameters(problem)
        return cls(problem, mu, p, eps, seed=seed, **kwargs)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["problem"] = {"kind": self.problem.kind.value, "m": self.problem.m, "n": self.problem.n}
        d["checks"] = list(self.checks)
        return d


@dataclass
class RunRecord:
    config: dict
    outcome: str
    generations: int
    evaluations: int
    front_size: int
    covered: int
    first_coverage: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    audit: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def coverage_fraction(self) -> float:
        return self.covered / self.front_size if self.front_size else 1.0

    def to_json(self, **kwargs) -> str:
        d = asdict(self)
        d["coverage_fraction"] = self.coverage_fraction
        return json.dumps(d, **kwargs)

    @classmethod
    def from_json(cls, text: str) -> RunRecord:
        d = json.loads(text)
        d.pop("coverage_fraction", None)
        return cls(**d)


def _rows(F) -> set[tuple[int, ...]]:
    return {tuple(int(a) for a in row) for row in F}


class NSGA3:
    """One run of the algorithm. ``step()`` advances exactly one generation."""

    def __init__(self, config: RunConfig):
        self.config = config
        d = config.problem
        self.problem = d
        self.rng = make_rng(config.seed)
        self.associator = Associator(d.m, config.p, mode=config.association, radius=config.lattice_radius)
        self.reference_points = None
        if config.faithful:
            self.reference_points = [tuple(r) for r in reference_point_array(d.m, config.p)]
        self.norm_state = NormalizationState(config.eps_nad)
        self.rate = 1.0 / d.n
        self.population = random_population(config.mu, d.n, self.rng)
        self.fitness = evaluate_population(self.population, d)
        self.generation = 0
        self.evaluations = config.mu
        self.violations: list[dict] = []
        self.trace: list[dict] = []
        self.audit: list[dict] = []
        self.front = pareto_front_fitness_set(d)
        self.first_coverage: dict[tuple[int, ...], int] = {}
        self._note_coverage()

    @property
    def covered(self) -> set[tuple[int, ...]]:
        return self.front & _rows(self.fitness)

    def is_covered(self) -> bool:
        return self.front <= _rows(self.fitness)

    def _note_coverage(self):
        for v in self.covered:
            self.first_coverage.setdefault(v, self.generation)

    def _fail(self, check: str, message: str, snapshot: dict):
        entry = {"generation": self.generation, "check": check, "message": message}
        self.violations.append(entry)
        if self.config.strict_checks:
            raise InvariantViolation(f"generation {self.generation}: {check}: {message}", snapshot)

    def step(self) -> None:
        cfg, d, rng = self.config, self.problem, self.rng
        mu = cfg.mu
        P, FP = self.population, self.fitness

        parents = rng.integers(0, mu, size=mu)
        Q = mutate_population(P[parents], self.rate, rng)
        FQ = evaluate_population(Q, d)
        self.evaluations += mu

        R = np.vstack([P, Q])
        FR = np.vstack([FP, FQ])
        layers = nondominated_sort(FR)
        i_star = critical_index([len(L) for L in layers], mu)
        Y = np.concatenate(layers[: i_star - 1]) if i_star > 1 else np.empty(0, dtype=np.int64)
        crit = layers[i_star - 1]

        self.norm_state, norm = normalize_generation(self.norm_state, FR, layers, i_star)

        ranked = np.concatenate([Y, crit])
        distinct, inverse = np.unique(FR[ranked], axis=0, return_inverse=True)
        assoc = [self.associator(v) for v in norm(distinct)]
        comps = {int(i): assoc[k][0] for i, k in zip(ranked, inverse.ravel())}
        dists = {int(i): assoc[k][1] for i, k in zip(ranked, inverse.ravel())}

        picks: list[dict] | None = [] if cfg.audit else None
        picked = select(Y.tolist(), crit.tolist(), mu, comps, dists, rng,
                        faithful=cfg.faithful, reference_points=self.reference_points, audit=picks)
        for a in picks or ():
            i = a.pop("index")
            self.audit.append({"generation": self.generation + 1, **a,
                               "fitness": [int(v) for v in FR[i]]})
        survivors = np.concatenate([Y, np.asarray(picked, dtype=np.int64)])

        covered_before = self.covered if "coverage" in cfg.checks else None
        potential_before = int(FP.sum(axis=1).max())

        self.population = R[survivors]
        self.fitness = FR[survivors]
        self.generation += 1
        self._note_coverage()

        if cfg.trace:
            row = {"generation": self.generation, "layers": len(layers), "i_star": i_star}
            row.update(norm.as_dict())
            row["covered"] = len(self.first_coverage)
            self.trace.append(row)

        if cfg.checks:
            self._check(FR, layers, norm, comps, survivors, covered_before, potential_before)

    def _check(self, FR, layers, norm, comps, survivors, covered_before, potential_before):
        checks = self.config.checks
        d = self.problem
        F1 = layers[0]

        def snapshot():
            return {
                "generation": self.generation,
                "joint_fitness": FR.tolist(),
                "first_layer": F1.tolist(),
                "survivors": survivors.tolist(),
                **norm.as_dict(),
            }

        if "cardinality" in checks and len(survivors) != self.config.mu:
            self._fail("cardinality", f"|P_t+1| = {len(survivors)}", snapshot())

        if "normalization" in checks:
            NF = norm(FR)
            if NF.min() < 0 or NF.max() > 1:
                self._fail("normalization", f"normalized range [{NF.min()}, {NF.max()}]", snapshot())
            span = norm.y_nad - norm.y_min
            if np.any(span > d.f_max):
                self._fail("normalization", f"y_nad - y_min = {span.tolist()} exceeds f_max {d.f_max}", snapshot())

        if "same_reference" in checks:
            seen: dict = {}
            for i in F1:
                f = tuple(int(a) for a in FR[i])
                other = seen.setdefault(comps[int(i)], f)
                if other != f:
                    self._fail("same_reference",
                               f"{other} and {f} share reference {comps[int(i)]}", snapshot())
                    break

        if "survival" in checks:
            lost = _rows(FR[F1]) - _rows(FR[survivors])
            if lost:
                self._fail("survival", f"first-layer vectors lost: {sorted(lost)}", snapshot())

        if "dominance" in checks and np.all(norm.y_nad > norm.y_min):
            U = np.unique(FR, axis=0)
            NU = norm(U)
            raw = np.all(U[:, None, :] >= U[None, :, :], axis=2)
            scaled = np.all(NU[:, None, :] >= NU[None, :, :], axis=2)
            if not np.array_equal(raw, scaled):
                self._fail("dominance", "weak dominance changed under normalization", snapshot())

        if "coverage" in checks:
            lost = covered_before - self.covered
            if lost:
                self._fail("coverage", f"Pareto-front vectors lost: {sorted(lost)}", snapshot())

        if "potential" in checks and d.kind is Kind.LOTZ:
            after = int(self.fitness.sum(axis=1).max())
            if after < potential_before:
                self._fail("potential", f"max objective sum fell from {potential_before} to {after}", snapshot())

    def record(self) -> RunRecord:
        return RunRecord(
            config=self.config.as_dict(),
            outcome="covered" if self.is_covered() else "budget-exhausted",
            generations=self.generation,
            evaluations=self.evaluations,
            front_size=len(self.front),
            covered=len(self.covered),
            first_coverage=sorted([list(v), g] for v, g in self.first_coverage.items()),
            violations=list(self.violations),
            trace=list(self.trace),
            audit=list(self.audit),
        )


def run(config: RunConfig) -> RunRecord:
    """Iterate generations until the front is covered (if ``stop_on_coverage``)
    or ``max_generations`` is reached."""
    engine = NSGA3(config)
    while engine.generation < config.max_generations:
        if config.stop_on_coverage and engine.is_covered():
            break
        engine.step()
    return engine.record()


def run_until_covered(config: RunConfig) -> RunRecord:
    if not config.stop_on_coverage:
        config = RunConfig(**{**config.__dict__, "stop_on_coverage": True})
    return run(config)
