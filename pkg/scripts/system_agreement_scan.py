"""Componentwise agreement of vertex- and corner-solved alphas over many seeds.

Each seed draws 100 fixtures (N <= 3, m <= 5, r uniform in (0, skew/2)) the
same way the acceptance suite does, and counts fixtures whose non-structural
entries differ by more than 1e-9 relative, or whose structural zeros exceed
1e-12 in the vertex solve.
"""

import argparse

import numpy as np

from maglab import CubeUnionSpec, alphas, skewness
from maglab.cubes import structural_zeros
from maglab.errors import NumericalError
from maglab.experiments import random_radius, random_skew_points


def scan(seed, n=100):
    rng = np.random.default_rng(seed)
    bad = []
    for _ in range(n):
        N, m = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        F = random_skew_points(rng, m, N)
        spec = CubeUnionSpec(F, random_radius(rng, F))
        try:
            v = alphas(spec, "vertex").values
            c = alphas(spec, "corner").values
        except NumericalError:
            bad.append((spec.radius / skewness(F), float("nan")))
            continue
        z = structural_zeros(spec)
        den = np.maximum(np.abs(v), np.abs(c))
        rel = float(np.max(np.abs(v - c)[~z] / den[~z])) if (~z).any() else 0.0
        zero = float(np.max(np.abs(v[z]))) if z.any() else 0.0
        if rel > 1e-9 or zero > 1e-12:
            bad.append((spec.radius / skewness(F), rel))
    return bad


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=60)
    args = ap.parse_args()
    total, batches = 0, 0
    for seed in range(args.seeds):
        bad = scan(seed)
        total += len(bad)
        batches += bool(bad)
        for ratio, rel in bad:
            print(f"seed {seed}: r/skew = {ratio:.2e}, relative diff = {rel:.2e}")
    print(f"{total} of {100 * args.seeds} fixtures fail; {batches} of {args.seeds} batches contain a failure")


if __name__ == "__main__":
    main()
