"""Empirical checks of the lemma-level claims behind the runtime bounds.

Every check returns a plain dict with at least ``name`` and ``passed``.
Controls that deliberately break a precondition are reported under
``control`` and never affect ``passed``.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction

import numpy as np

from .core import make_rng
from .dominance import max_antichain_size
from .engine import RunConfig, derive_theorem_parameters, run
from .errors import InvalidParameterError
from .normalization import NormalizationState, hyperplane_intercepts, nadir_estimate, update_trackers
from .objectives import Problem
from .refpoints import Associator, reference_point_array, reference_point_count

MANIFEST = {
    "version": 1,
    "trig": {"grid": 1_000_000},
    "angle": {"trials": 100_000, "m": [2, 3, 4], "f_max": [1, 5, 20], "seed": 11},
    "antichain": [
        {"kind": "lotz", "m": 4, "n": 4, "relation": "<=", "bound": 27},
        {"kind": "cocz", "m": 2, "n": 4, "relation": "==", "bound": 3},
        {"kind": "cocz", "m": 4, "n": 8, "relation": "==", "bound": 9},
    ],
    "same_reference": {
        "runs": [
            {"kind": "omm", "m": 2, "n": 8, "seeds": 5, "generations": 200},
            {"kind": "omm3", "m": 3, "n": 8, "p": 84, "seeds": 5, "generations": 200},
        ],
        "control": {"kind": "omm", "m": 2, "n": 8, "p": 2, "seeds": 5, "generations": 200},
    },
    "survival": {
        "runs": [
            {"kind": "lotz", "m": 2, "n": 10, "mu": 11, "seeds": 5, "generations": 500},
            {"kind": "cocz", "m": 2, "n": 8, "mu": 5, "seeds": 5, "generations": 500},
        ],
        "control": {"kind": "lotz", "m": 2, "n": 10, "mu": 1, "seeds": 5, "generations": 500},
    },
    "refpoints": {"m_max": 4, "p_max": 30, "vectors": 10_000, "seed": 7},
}


def manifest_hash(manifest: dict = MANIFEST) -> str:
    return hashlib.sha256(json.dumps(manifest, sort_keys=True).encode()).hexdigest()


def check_trig_identity(grid: int = 1_000_000) -> dict:
    """``2 asin(x/2) < asin(x)`` on the grid ``k / grid``, ``k = 1..grid``."""
    if grid < 2:
        raise InvalidParameterError("grid must be >= 2")
    x = np.arange(1, grid + 1, dtype=np.float64) / grid
    margin = np.arcsin(x) - 2 * np.arcsin(x / 2)
    k = int(np.argmin(margin))
    violations = int(np.count_nonzero(margin <= 0))
    return {
        "name": "trig_identity",
        "passed": violations == 0,
        "grid": grid,
        "violations": violations,
        "min_margin": float(margin[k]),
        "min_margin_at": float(x[k]),
    }


def angle_pairs(trials: int, m: int, f_max: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Random ``v, w`` in ``[0,1]^m`` with ``w_i = v_i + l1`` and ``w_j = v_j - l2``
    for distinct ``i, j`` and ``l1, l2 >= 1/f_max``.

    The shifts are drawn first so every sample is feasible; a quarter of
    them sit exactly on ``1/f_max``.
    """
    lo = 1.0 / f_max
    l1 = lo + rng.random(trials) * (1 - lo)
    l2 = lo + rng.random(trials) * (1 - lo)
    l1[rng.random(trials) < 0.25] = lo
    l2[rng.random(trials) < 0.25] = lo
    i = rng.integers(m, size=trials)
    j = (i + 1 + rng.integers(m - 1, size=trials)) % m
    v = rng.random((trials, m))
    w = rng.random((trials, m))
    rows = np.arange(trials)
    v[rows, i] = rng.random(trials) * (1 - l1)
    v[rows, j] = l2 + rng.random(trials) * (1 - l2)
    w[rows, i] = v[rows, i] + l1
    w[rows, j] = v[rows, j] - l2
    return v, w


def sine_between(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise sine of the angle between ``v`` and ``w`` as distance-to-ray / |v|."""
    wn = w / np.linalg.norm(w, axis=1, keepdims=True)
    proj = np.sum(v * wn, axis=1, keepdims=True) * wn
    return np.linalg.norm(v - proj, axis=1) / np.linalg.norm(v, axis=1)


def check_angle_lower_bound(trials: int, m: int, f_max: float, rng) -> dict:
    if m < 2 or f_max < 1:
        raise InvalidParameterError("need m >= 2 and f_max >= 1")
    v, w = angle_pairs(trials, m, f_max, rng)
    bound = 1.0 / (math.sqrt(m) * f_max)
    s = sine_between(v, w)
    violations = int(np.count_nonzero(s < bound))
    return {
        "name": "angle_lower_bound",
        "passed": violations == 0,
        "m": m,
        "f_max": f_max,
        "trials": trials,
        "violations": violations,
        "bound": bound,
        "min_sine": float(s.min()),
    }


def _sweep(entries, checks):
    audited = 0
    violations = 0
    details = []
    for e in entries:
        problem = Problem(e["kind"], e["m"], e["n"])
        mu, p, eps = derive_theorem_parameters(problem)
        mu = e.get("mu", mu)
        p = e.get("p", p)
        for seed in range(e["seeds"]):
            cfg = RunConfig(problem, mu, p, eps, seed=seed, max_generations=e["generations"],
                            checks=checks, strict_checks=False, stop_on_coverage=False)
            rec = run(cfg)
            bad = [v for v in rec.violations if v["check"] in checks]
            audited += rec.generations
            violations += len(bad)
            details.append({"problem": str(problem), "mu": mu, "p": p, "seed": seed,
                            "generations": rec.generations, "violations": len(bad)})
    return {"generations_audited": audited, "violations": violations, "runs": details}


def check_same_reference_property(runs: list[dict], control: dict | None = None) -> dict:
    """Distinct first-layer fitness vectors never share a reference point."""
    out = {"name": "same_reference", **_sweep(runs, ("same_reference", "normalization"))}
    out["passed"] = out["violations"] == 0
    if control:
        c = _sweep([control], ("same_reference",))
        out["control"] = {"config": control, "violations": c["violations"],
                          "generations_audited": c["generations_audited"]}
    return out


def check_survival_property(runs: list[dict], control: dict | None = None) -> dict:
    """Every first-layer fitness vector has a copy in the next population."""
    out = {"name": "survival", **_sweep(runs, ("survival",))}
    out["passed"] = out["violations"] == 0
    if control:
        c = _sweep([control], ("survival",))
        out["control"] = {"config": control, "violations": c["violations"],
                          "generations_audited": c["generations_audited"]}
    return out


def check_antichain_bounds(instances: list[dict]) -> dict:
    rows = []
    for inst in instances:
        size = max_antichain_size(Problem(inst["kind"], inst["m"], inst["n"]))
        if inst["relation"] == "<=":
            ok = size <= inst["bound"]
        else:
            ok = size == inst["bound"]
        rows.append({**inst, "oracle": size, "passed": ok})
    return {"name": "antichain_bounds", "passed": all(r["passed"] for r in rows), "instances": rows}


def check_reference_points(m_max: int = 4, p_max: int = 30, vectors: int = 10_000, seed: int = 7) -> dict:
    """Lattice cardinality for every (m, p), and exhaustive/lattice association agreement."""
    rng = make_rng(seed)
    count_failures = []
    mismatches = 0
    compared = 0
    for m in range(1, m_max + 1):
        for p in range(1, p_max + 1):
            if len(reference_point_array(m, p)) != reference_point_count(m, p):
                count_failures.append([m, p])
            if m < 2:
                continue
            V = rng.random((vectors, m))
            ex, _ = Associator(m, p, "exhaustive").associate_many(V)
            la, _ = Associator(m, p, "lattice").associate_many(V)
            compared += len(V)
            mismatches += sum(a != b for a, b in zip(ex, la))
    return {
        "name": "reference_points",
        "passed": not count_failures and mismatches == 0,
        "count_failures": count_failures,
        "association_compared": compared,
        "association_mismatches": mismatches,
    }


def check_normalization_examples() -> dict:
    """The two worked 3-objective intercept examples."""
    e1 = [(2, 1, 2), (1, 0, 3), (0, 2, 0)]
    I1 = hyperplane_intercepts(e1)
    first = I1 is not None and I1[0] == Fraction(-8)
    state = update_trackers(NormalizationState(eps_nad=2), [(2, 0, 0), (0, 4, 0), (0, 0, 2)],
                            [(2, 0, 0), (0, 4, 0), (0, 0, 2)])
    _, valid1 = nadir_estimate(state, I1, [(2, 0, 0), (0, 4, 0), (0, 0, 2)], [(2, 0, 0), (0, 4, 0), (0, 0, 2)])
    I2 = hyperplane_intercepts([(2, 0, 0), (0, 4, 0), (0, 0, 2)])
    y_nad2, valid2 = nadir_estimate(state, I2, [(2, 0, 0), (0, 4, 0), (0, 0, 2)], [(2, 0, 0), (0, 4, 0), (0, 0, 2)])
    second = I2 == (2, 4, 2) and valid2 and y_nad2.tolist() == [2.0, 4.0, 2.0]
    return {
        "name": "normalization_examples",
        "passed": bool(first and not valid1 and second),
        "dependent_example": {"intercepts": [str(x) for x in I1] if I1 else None, "valid": valid1},
        "independent_example": {"intercepts": [str(x) for x in I2] if I2 else None, "valid": valid2},
    }


def _angle_suite(cfg):
    rng = make_rng(cfg["seed"])
    rows = [check_angle_lower_bound(cfg["trials"], m, f, rng) for m in cfg["m"] for f in cfg["f_max"]]
    return {"name": "angle_lower_bound", "passed": all(r["passed"] for r in rows), "cases": rows}


SUITES = {
    "trig": lambda M: check_trig_identity(M["trig"]["grid"]),
    "angle": lambda M: _angle_suite(M["angle"]),
    "antichain": lambda M: check_antichain_bounds(M["antichain"]),
    "same_reference": lambda M: check_same_reference_property(M["same_reference"]["runs"], M["same_reference"]["control"]),
    "survival": lambda M: check_survival_property(M["survival"]["runs"], M["survival"]["control"]),
    "refpoints": lambda M: check_reference_points(**{k: M["refpoints"][k] for k in ("m_max", "p_max", "vectors", "seed")}),
    "normalization": lambda M: check_normalization_examples(),
}


def run_suite(names=("all",), manifest: dict = MANIFEST) -> dict:
    """Run the named checks (``"all"`` for every one) and collect a report."""
    names = list(SUITES) if "all" in names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InvalidParameterError(f"unknown verification checks: {unknown}")
    results = [SUITES[n](manifest) for n in names]
    return {
        "manifest_version": manifest["version"],
        "manifest_hash": manifest_hash(manifest),
        "passed": all(r["passed"] for r in results),
        "checks": results,
    }

