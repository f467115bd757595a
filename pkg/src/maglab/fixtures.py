"""Worked examples with published reference values, embedded for ``maglab check``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from maglab.cubes import (
    CubeUnionSpec,
    alpha_limits,
    alphas,
    corner,
    corner_system,
    cube_union_magnitude,
    vertex_system,
    weight_measure,
)
from maglab.metric import PointSet, magnitude_finite, skewness
from maglab.oracles import interval_union_magnitude, two_point_closed_form, two_point_nonskew_closed_form

TRIPLE = ((0.0, 0.0), (4.0, 8.0), (7.0, 3.0))
TRIPLE_MAGNITUDE = 2.99923
TRIPLE_MAGNITUDE_TOL = 5e-6

# alpha at r = 1, canonical order, rounded to seven decimals
TRIPLE_ALPHAS_R1 = (
    0.0, 0.0, 0.0, 0.0028011,
    0.0003345, 0.0, 0.0179801, 0.0,
    0.0024718, 0.0179855, 0.0, 0.0,
)
TRIPLE_ALPHA_TOL = 5e-7
ZERO_TOL = 1e-10

TRIPLE_ALPHA_LIMITS = (
    0.0, 0.0, 0.0, 0.0000515,
    0.0000061, 0.0, 0.0003353, 0.0,
    0.0000454, 0.0003353, 0.0, 0.0,
)
LIMIT_TOL = 5e-8

# four points a, b, c, d and their nonempty corners, keyed by (point, sign vector)
CORNER_POINTS = ((0.0, 0.0), (1.0, 3.0), (3.0, 2.0), (4.0, -1.0))
CORNER_TABLE = {
    (1, (-1, -1)): (0,),
    (2, (-1, -1)): (0,),
    (2, (-1, 1)): (1,),
    (3, (-1, 1)): (0, 1, 2),
    (0, (1, -1)): (3,),
    (1, (1, -1)): (2, 3),
    (2, (1, -1)): (3,),
    (0, (1, 1)): (1, 2),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: str
    expected: str


def _fmt(x) -> str:
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + " ".join(format(float(v), ".10g") for v in x) + "]"
    return format(float(x), ".10g")


def check_triple_magnitude() -> CheckResult:
    mg = magnitude_finite(PointSet(TRIPLE))
    return CheckResult(
        "triple magnitude", abs(mg - TRIPLE_MAGNITUDE) <= TRIPLE_MAGNITUDE_TOL,
        _fmt(mg), f"{TRIPLE_MAGNITUDE} +- {TRIPLE_MAGNITUDE_TOL:g}",
    )


def check_triple_alphas() -> CheckResult:
    got = alphas(CubeUnionSpec(PointSet(TRIPLE), 1.0)).values
    want = np.array(TRIPLE_ALPHAS_R1)
    tol = np.where(want == 0, ZERO_TOL, TRIPLE_ALPHA_TOL)
    return CheckResult(
        "triple alpha table", bool(np.all(np.abs(got - want) <= tol)), _fmt(got), _fmt(want)
    )


def check_triple_limits() -> CheckResult:
    F = PointSet(TRIPLE)
    lim = alpha_limits(F)
    want = np.array(TRIPLE_ALPHA_LIMITS)
    ok = bool(np.all(np.abs(lim.alpha0 - want) <= LIMIT_TOL))
    ok &= abs(lim.magnitude_limit - magnitude_finite(F)) <= 1e-10
    return CheckResult("triple limit alphas", ok, _fmt(lim.alpha0), _fmt(want))


def check_intervals() -> CheckResult:
    single = interval_union_magnitude([(0.0, 2.0)])
    a, r = 3.0, 0.4
    pair = interval_union_magnitude([(-r, r), (a - r, a + r)])
    cubes = cube_union_magnitude(CubeUnionSpec(PointSet([[0.0], [a]]), r))
    want = [2.0, 1 + 2 * r + math.tanh((a - 2 * r) / 2)]
    ok = abs(single - want[0]) <= 1e-15 and abs(pair - want[1]) <= 1e-12 and abs(cubes - want[1]) <= 1e-10
    return CheckResult("interval unions", ok, _fmt([single, pair, cubes]), _fmt([want[0], want[1], want[1]]))


def check_single_cube() -> CheckResult:
    got, want = [], []
    for N, r in ((1, 0.3), (2, 0.25), (3, 0.7)):
        spec = CubeUnionSpec(PointSet([[1.5] * N]), r)
        got.append(cube_union_magnitude(spec))
        want.append((1 + r) ** N)
    ok = bool(np.allclose(got, want, rtol=0, atol=1e-12))
    return CheckResult("single cube", ok, _fmt(got), _fmt(want))


def check_corners() -> CheckResult:
    F = PointSet(CORNER_POINTS)
    bad = []
    for q in range(F.m):
        for u in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
            if corner(F, q, u) != CORNER_TABLE.get((q, u), ()):
                bad.append(f"Cor({'abcd'[q]},{u})")
    return CheckResult("four-point corners", not bad, ",".join(bad) or "all 16 match", "all 16 match")


def check_systems() -> CheckResult:
    r = 0.5
    spec = CubeUnionSpec(PointSet(TRIPLE), r)
    Z, b = vertex_system(spec)
    B, c = corner_system(spec)
    e = math.exp
    checks = [
        (Z[0, 1], e(-2 * r)),
        (Z[0, 4], e(-12)),
        (Z[1, 4], e(-(12 - 2 * r))),
        (b[3], e(-(12 - 4 * r)) + e(-(10 - 4 * r))),
        (c[3], e(-(12 - 4 * r)) + e(-(10 - 4 * r))),
        (B[6, 9], e(-(8 - 4 * r))),
        (B[4, 0], e(-12)),
    ]
    ok = all(abs(x - y) <= 1e-15 for x, y in checks)
    ok &= bool(np.array_equal(B[:3], np.eye(12)[:3]) and np.all(c[:3] == 0))
    return CheckResult("triple vertex/corner systems", ok, _fmt([x for x, _ in checks]), _fmt([y for _, y in checks]))


def check_singleton() -> CheckResult:
    spec = CubeUnionSpec(PointSet([[2.0, -1.0]]), 0.3)
    W = weight_measure(spec)
    ok = len(W.dirac_corrections) == 0 and abs(W.total_mass - 1.3**2) <= 1e-14
    return CheckResult("singleton weight measure", ok, _fmt(W.total_mass), _fmt(1.3**2))


def check_skew_pair() -> CheckResult:
    p, r = (3.0, 4.0), 0.5
    got = cube_union_magnitude(CubeUnionSpec(PointSet([[0.0, 0.0], p]), r))
    want = two_point_closed_form(p, r)
    lim = two_point_closed_form(p, 0.0)
    ok = abs(got - want) <= 1e-10 and abs(lim - magnitude_finite(PointSet([[0.0, 0.0], p]))) <= 1e-12
    return CheckResult("skew pair", ok, _fmt([got, lim]), _fmt([want, 2 / (1 + math.exp(-7))]))


def check_nonskew_pair() -> CheckResult:
    a, r = 2.5, 0.1
    got = two_point_nonskew_closed_form((a, 0.0), 1, r)
    # factorisation: 1-D skew pair times a segment of magnitude 1 + r
    want = cube_union_magnitude(CubeUnionSpec(PointSet([[0.0], [a]]), r)) * (1 + r)
    lim = two_point_nonskew_closed_form((a, 0.0), 1, 0.0)
    mgF = magnitude_finite(PointSet([[0.0, 0.0], [a, 0.0]]))
    ok = abs(got - want) <= 1e-12 and abs(lim - mgF) <= 1e-12 and skewness(PointSet([[0.0, 0.0], [a, 0.0]])) == 0
    return CheckResult("non-skew pair", ok, _fmt([got, lim]), _fmt([want, mgF]))


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_triple_magnitude,
    check_triple_alphas,
    check_triple_limits,
    check_intervals,
    check_single_cube,
    check_corners,
    check_systems,
    check_singleton,
    check_skew_pair,
    check_nonskew_pair,
)


def run_checks() -> list[CheckResult]:
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # a crashing fixture is a failed fixture
            name = fn.__name__.removeprefix("check_")
            out.append(CheckResult(name, False, f"error: {exc}", "no error"))
    return out
