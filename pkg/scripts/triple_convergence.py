"""Gap mg(cubes) - mg(F) for the three-point fixture along a geometric schedule.

    python3 scripts/triple_convergence.py --steps 13 > gaps.csv
"""

import argparse
import sys

from maglab import PointSet, convergence_sweep
from maglab.experiments import geometric_schedule
from maglab.io import to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r-start", type=float, default=1.0)
    ap.add_argument("--r-end", type=float, default=1e-4)
    ap.add_argument("--steps", type=int, default=13)
    args = ap.parse_args()

    F = PointSet([[0, 0], [4, 8], [7, 3]])
    rep = convergence_sweep(F, geometric_schedule(args.r_start, args.r_end, args.steps))
    rows = [(x.r, x.gap, x.gap / x.r) for x in rep.rows]
    sys.stdout.write(to_csv(["r", "gap", "gap_over_r"], rows))
    print(f"# linear intercept (3 smallest r): {rep.linear_intercept():.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
