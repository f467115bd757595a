"""Largest |mg(F) - mg(F')| over jittered copies F' at several noise scales."""

import argparse

from maglab import PointSet, continuity_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    F = PointSet([[0, 0], [4, 8], [7, 3]])
    print(f"{'scale':>8}{'max d_H':>12}{'max delta_mg':>14}")
    for scale in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
        pairs = continuity_probe(F, scale, args.trials, args.seed)
        print(f"{scale:>8.0e}{max(d for d, _ in pairs):>12.3e}{max(g for _, g in pairs):>14.3e}")


if __name__ == "__main__":
    main()
