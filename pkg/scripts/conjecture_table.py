"""Fitted exponent and log-coefficient of det(vertex matrix) for a few small fixtures.

Also shows how the leading coefficient of a 1-D pair depends on its spacing a
(the exact value is 16 (1 - exp(-2a))).
"""

import math

from maglab import PointSet, conjecture_probe

FIXTURES = {
    "interval": [[0.0]],
    "square": [[0.0, 0.0]],
    "cube": [[0.0, 0.0, 0.0]],
    "pair a=3": [[0.0], [3.0]],
    "triple": [[0, 0], [4, 8], [7, 3]],
    "skew 3d pair": [[0, 0, 0], [2, 3, 5]],
}


def main():
    print(f"{'fixture':<14}{'k':>4}{'slope':>10}{'coeff':>10}{'k log 4':>10}  consistent")
    for name, pts in FIXTURES.items():
        rep = conjecture_probe(PointSet(pts))
        print(f"{name:<14}{rep.k_expected:>4}{rep.fitted_exponent:>10.4f}{rep.fitted_log_coefficient:>10.4f}"
              f"{rep.expected_log_coefficient:>10.4f}  {rep.consistent()}")
    print("\npair spacing a: fitted coeff - 2 log 4 vs log(1 - exp(-2a))")
    for a in (0.5, 1.0, 2.0, 3.0, 5.0):
        rep = conjecture_probe(PointSet([[0.0], [a]]))
        print(f"  a={a:<4} {rep.fitted_log_coefficient - rep.expected_log_coefficient:+.5f}"
              f"  {math.log1p(-math.exp(-2 * a)):+.5f}")


if __name__ == "__main__":
    main()
