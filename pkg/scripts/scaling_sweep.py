"""Generation counts of 2-LOTZ as n grows, against the 6n^2 bound.

Wraps the ``sweep`` subcommand and summarizes the CSV it writes.

    python scripts/scaling_sweep.py --n 8,12,16,20 --trials 20 --workers 4
"""

import argparse
import csv
import math
import sys
from collections import defaultdict
from pathlib import Path

from nsga3.harness import main as cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="8,12,16,20")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--base-seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/lotz_scaling.csv"))
    args = ap.parse_args(argv)

    status = cli(["sweep", "--problem", "lotz", "--m", "2", "--n", args.n, "--trials", str(args.trials),
                  "--base-seed", str(args.base_seed), "--workers", str(args.workers), "--out", str(args.out)])
    if status:
        return status

    by_n = defaultdict(list)
    with args.out.open() as fh:
        for row in csv.DictReader(fh):
            by_n[int(row["n"])].append(int(row["generations"]))
    print(f"{'n':>4}{'mean gens':>11}{'max':>6}{'6n^2':>7}{'mean/n^2':>10}")
    for n, gens in sorted(by_n.items()):
        mean = sum(gens) / len(gens)
        print(f"{n:>4}{mean:>11.1f}{max(gens):>6}{6 * n * n:>7}{mean / n**2:>10.3f}")
    # a least-squares slope on log-log axes; near 2 suggests quadratic growth
    xs = [math.log(n) for n in by_n]
    ys = [math.log(sum(g) / len(g)) for g in by_n.values()]
    if len(xs) > 1:
        mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
        print(f"log-log slope of mean generations vs n: {slope:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
