"""Command-line front end: single runs, seeded sweeps, verification and lattice dumps.

Exit codes: 0 success, 1 usage error, 2 failed check, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import trial_seed
from .engine import CHECKS, RunConfig, derive_theorem_parameters, run
from .errors import CapacityError, InvalidParameterError, InvariantViolation
from .objectives import Kind, Problem, pareto_front_fitness_set, pareto_front_size
from .refpoints import MODES, reference_point_array
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_CAPACITY = 0, 1, 2, 3

SWEEP_COLUMNS = ("problem", "m", "n", "mu", "p", "eps_nad", "seed", "generations",
                 "evaluations", "covered", "wallclock_ms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _checks(text: str) -> tuple[str, ...]:
    if text in ("", "none"):
        return ()
    if text == "all":
        return CHECKS
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    return names


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=[k.value for k in Kind], default="lotz")
    p.add_argument("--m", type=int, default=2)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="nsga3", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, help="key=value file overriding subcommand defaults")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = subs["run"] = sub.add_parser("run", help="one run, written as a JSON RunRecord")
    _problem_args(p)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--params", choices=("auto", "manual"), default="auto")
    p.add_argument("--mu", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--eps-nad", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-generations", type=int)
    p.add_argument("--checks", type=_checks, default=(), help="comma list, 'all' or 'none'")
    p.add_argument("--association", choices=MODES, default="auto")
    p.add_argument("--lattice-radius", type=int)
    p.add_argument("--faithful", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--out", type=Path)

    p = subs["sweep"] = sub.add_parser("sweep", help="many seeded runs, one CSV row each")
    _problem_args(p)
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated problem sizes")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--max-generations", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path)

    p = subs["verify"] = sub.add_parser("verify", help="lemma-level empirical checks")
    p.add_argument("--suite", default="all", help=f"comma list from: all, {', '.join(SUITES)}")
    p.add_argument("--out", type=Path)

    p = subs["refpoints"] = sub.add_parser("refpoints", help="reference-point lattice as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out", type=Path)

    p = subs["front"] = sub.add_parser("front", help="Pareto-front fitness vectors")
    _problem_args(p)
    p.add_argument("--n", type=int, required=True)
    return parser, subs


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes and underscores are interchangeable."""
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(sub: argparse.ArgumentParser, values: dict[str, str]) -> None:
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None or key == "help":
            raise UsageError(f"config key {key!r} is not an option of {sub.prog}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = text.lower() in ("1", "true", "yes", "on")
            continue
        value = action.type(text) if action.type else text
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
        defaults[key] = value
        action.required = False
    sub.set_defaults(**defaults)


def parse_args(argv) -> argparse.Namespace:
    parser, subs = build_parser()
    # the config must be applied before the real parse so it can satisfy required options
    pre = _Parser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, rest = pre.parse_known_args(argv)
    command = next((a for a in rest if a in subs), None)
    if known.config is not None and command is not None:
        if not known.config.exists():
            raise UsageError(f"config file {known.config} not found")
        _apply_config(subs[command], read_config(known.config))
    return parser.parse_args(argv)


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _run_config(args) -> RunConfig:
    problem = Problem(args.problem, args.m, args.n)
    explicit = [args.mu, args.p, args.eps_nad]
    if args.params == "auto":
        if any(v is not None for v in explicit):
            raise UsageError("--mu/--p/--eps-nad need --params manual")
        mu, p, eps = derive_theorem_parameters(problem)
    else:
        if any(v is None for v in explicit):
            raise UsageError("--params manual needs --mu, --p and --eps-nad")
        mu, p, eps = explicit
    return RunConfig(problem, mu, p, eps, seed=args.seed, max_generations=args.max_generations,
                     checks=args.checks, association=args.association,
                     lattice_radius=args.lattice_radius, faithful=args.faithful, trace=args.trace)


def cmd_run(args) -> int:
    record = run(_run_config(args))
    _write(record.to_json(indent=2) + "\n", args.out)
    print(f"{record.outcome}: {record.covered}/{record.front_size} front vectors after "
          f"{record.generations} generations ({record.evaluations} evaluations)", file=sys.stderr)
    return EXIT_CHECK if record.violations else EXIT_OK


def sweep_trial(kind: str, m: int, n: int, seed: int, max_generations: int | None) -> dict:
    """One theorem-parameter run reduced to a sweep row."""
    cfg = RunConfig.theorem(Problem(kind, m, n), seed=seed, max_generations=max_generations)
    start = time.perf_counter()
    rec = run(cfg)
    ms = (time.perf_counter() - start) * 1000
    return {"problem": kind, "m": m, "n": n, "mu": cfg.mu, "p": cfg.p, "eps_nad": cfg.eps_nad,
            "seed": seed, "generations": rec.generations, "evaluations": rec.evaluations,
            "covered": str(rec.outcome == "covered").lower(), "wallclock_ms": f"{ms:.1f}"}


def sweep_rows(kind: str, m: int, ns: list[int], trials: int, base_seed: int,
               max_generations: int | None = None, workers: int = 1) -> list[dict]:
    if not ns:
        raise UsageError("--n needs at least one problem size")
    if trials < 1 or workers < 1:
        raise UsageError("--trials and --workers must be >= 1")
    for n in ns:
        Problem(kind, m, n)  # validate every size before starting work
    jobs = [(kind, m, n, trial_seed(base_seed, t), max_generations) for n in ns for t in range(trials)]
    if workers == 1:
        rows = [sweep_trial(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_trial, *zip(*jobs)))
    rows.sort(key=lambda r: (r["n"], r["seed"]))
    return rows


def rows_to_csv(rows: list[dict], columns=SWEEP_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    rows = sweep_rows(args.problem, args.m, args.n, args.trials, args.base_seed,
                      args.max_generations, args.workers)
    _write(rows_to_csv(rows), args.out)
    covered = sum(r["covered"] == "true" for r in rows)
    print(f"{covered}/{len(rows)} runs covered the front", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = tuple(s.strip() for s in args.suite.split(",") if s.strip())
    report = run_suite(names)
    _write(json.dumps(report, indent=2) + "\n", args.out)
    for check in report["checks"]:
        print(f"{'PASS' if check['passed'] else 'FAIL'} {check['name']}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_CHECK


def cmd_refpoints(args) -> int:
    A = reference_point_array(args.m, args.p)
    cols = [f"a{i}" for i in range(1, args.m + 1)] + [f"r{i}" for i in range(1, args.m + 1)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in A:
        w.writerow([int(a) for a in row] + [repr(int(a) / args.p) for a in row])
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_front(args) -> int:
    problem = Problem(args.problem, args.m, args.n)
    front = sorted(pareto_front_fitness_set(problem))
    for v in front:
        print(",".join(str(a) for a in v))
    closed = pareto_front_size(problem)
    print(f"enumerated={len(front)} closed_form={closed}")
    return EXIT_OK if len(front) == closed else EXIT_CHECK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify,
            "refpoints": cmd_refpoints, "front": cmd_front}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, InvalidParameterError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
