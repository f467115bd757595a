"""Convergence sweeps, the vertex-determinant probe and empirical continuity probes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from maglab.cubes import CubeUnionSpec, Method, cube_union_magnitude, vertex_matrix
from maglab.errors import DomainError, DuplicatePointError, NumericalError
from maglab.linalg import log_determinant
from maglab.metric import PointSet, hausdorff_distance, is_skew, magnitude_finite, skewness

MAX_RESAMPLES = 100


def random_skew_points(rng: np.random.Generator, m: int, dim: int, gap=(0.5, 2.5), offset: float = 0.0) -> PointSet:
    """Random skew set: each axis is an independent shuffle of increasing coordinates.

    Consecutive coordinates on an axis differ by ``uniform(*gap)``, so the
    skewness is at least ``gap[0]``.
    """
    cols = []
    for _ in range(dim):
        c = offset + np.cumsum(rng.uniform(gap[0], gap[1], size=m))
        cols.append(rng.permutation(c))
    return PointSet(np.column_stack(cols))


def random_radius(rng: np.random.Generator, F: PointSet, cap: float = 1.0) -> float:
    """Uniform radius in ``(0, skew(F)/2)``; ``(0, cap)`` for a singleton."""
    hi = min(skewness(F) / 2, cap) if F.m == 1 else skewness(F) / 2
    r = 0.0
    while r == 0.0:
        r = float(rng.uniform(0, hi))
    return r


def geometric_schedule(r_start: float, r_end: float, steps: int) -> np.ndarray:
    if steps == 1:
        return np.array([float(r_start)])
    return np.geomspace(r_start, r_end, steps)


def linear_schedule(r_start: float, r_end: float, steps: int) -> np.ndarray:
    if steps == 1:
        return np.array([float(r_start)])
    return np.linspace(r_start, r_end, steps)


def _validate_schedule(F: PointSet, schedule) -> np.ndarray:
    rs = np.asarray(schedule, dtype=float).ravel()
    if rs.size == 0:
        raise DomainError("empty radius schedule")
    if not is_skew(F):
        raise DomainError(f"point set is not skew (skew(F) = {skewness(F):g})")
    bound = skewness(F) / 2
    bad = [r for r in rs if not (np.isfinite(r) and 0 < r < bound)]
    if bad:
        raise DomainError(f"radius {bad[0]:g} outside (0, skew(F)/2) = (0, {bound:g})")
    if len(set(rs.tolist())) != rs.size:
        raise DomainError("radius schedule contains repeated values")
    return rs


@dataclass(frozen=True)
class SweepRow:
    r: float
    mg_cubes: float
    gap: float


@dataclass(frozen=True)
class SweepReport:
    rows: list[SweepRow]
    base_magnitude: float

    def radii(self) -> np.ndarray:
        return np.array([row.r for row in self.rows])

    def gaps(self) -> np.ndarray:
        return np.array([row.gap for row in self.rows])

    def linear_intercept(self, tail: int = 3) -> float:
        """Extrapolate the gap to ``r = 0`` with a line through the ``tail`` smallest radii."""
        r, g = self.radii()[-tail:], self.gaps()[-tail:]
        if r.size < 2:
            return float(g[0])
        _, intercept = np.polyfit(r, g, 1)
        return float(intercept)

    def to_dict(self) -> dict:
        return {
            "base_magnitude": self.base_magnitude,
            "rows": [
                {"r": x.r, "mg_cubes": x.mg_cubes, "mg_F": self.base_magnitude, "gap": x.gap}
                for x in self.rows
            ],
        }


def convergence_sweep(F: PointSet, schedule: Sequence[float], method: Method = "auto") -> SweepReport:
    """Evaluate ``mg(cubes(F, r)) - mg(F)`` along a schedule (rows sorted by descending r).

    Every radius is validated before anything is computed, so an invalid
    schedule never produces a partial report.
    """
    rs = np.sort(_validate_schedule(F, schedule))[::-1]
    base = magnitude_finite(F)
    rows = []
    for r in rs:
        mg = cube_union_magnitude(CubeUnionSpec(F, float(r)), method)
        rows.append(SweepRow(float(r), mg, mg - base))
    return SweepReport(rows, base)


@dataclass(frozen=True)
class ConjectureReport:
    k_expected: int
    rows: list[tuple[float, float]]
    fitted_exponent: float
    fitted_log_coefficient: float

    @property
    def expected_log_coefficient(self) -> float:
        return self.k_expected * float(np.log(4))

    def exponent_error(self) -> float:
        return abs(self.fitted_exponent - self.k_expected)

    def log_coefficient_error(self) -> float:
        return abs(self.fitted_log_coefficient - self.expected_log_coefficient)

    def consistent(self, exponent_tol: float = 0.05, coefficient_tol_per_k: float = 0.05) -> bool:
        return (
            self.exponent_error() <= exponent_tol
            and self.log_coefficient_error() <= coefficient_tol_per_k * self.k_expected
        )

    def to_dict(self) -> dict:
        return {
            "k_expected": self.k_expected,
            "rows": [{"r": r, "logdet": ld} for r, ld in self.rows],
            "fitted_exponent": self.fitted_exponent,
            "fitted_log_coeff": self.fitted_log_coefficient,
            "expected_log_coeff": self.expected_log_coefficient,
        }


def edge_count(F: PointSet) -> int:
    """Number of 1-dimensional faces of the cube union: ``2^(N-1) N m``."""
    return 2 ** (F.dim - 1) * F.dim * F.m


def default_conjecture_schedule(F: PointSet, steps: int = 8) -> np.ndarray:
    """Geometric radii in ``[1e-4 L, 1e-3 L]`` with ``L = min(skew(F), 1)``.

    The fit ignores the ``O(r^(k+1))`` term, which biases slope and intercept
    by ``O(r)``; three decades below the skewness keep that bias under 1%.
    """
    L = min(skewness(F), 1.0)
    return np.geomspace(1e-3 * L, 1e-4 * L, steps)


def conjecture_probe(F: PointSet, schedule: Optional[Sequence[float]] = None) -> ConjectureReport:
    """Fit ``log det Z_vertices ~ k log r + c`` and compare with ``k``, ``k log 4``."""
    if schedule is None:
        schedule = default_conjecture_schedule(F)
    rs = np.sort(_validate_schedule(F, schedule))[::-1]
    if rs.size < 4:
        raise DomainError(f"need >= 4 fit points, got {rs.size}")
    ratios = rs[1:] / rs[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-9, atol=0):
        raise DomainError("conjecture schedule must be geometric")
    rows = []
    for r in rs:
        ld = log_determinant(vertex_matrix(CubeUnionSpec(F, float(r))))
        if ld.sign <= 0:
            raise NumericalError(f"vertex similarity determinant is not positive at r = {r:g}")
        rows.append((float(r), ld.log_abs))
    x = np.log(rs)
    y = np.array([ld for _, ld in rows])
    slope, intercept = np.polyfit(x, y, 1)
    return ConjectureReport(edge_count(F), rows, float(slope), float(intercept))


def continuity_probe(F: PointSet, scale: float, trials: int, seed: int = 0) -> list[tuple[float, float]]:
    """Pair ``d_H(F, F')`` with ``|mg(F) - mg(F')|`` for uniformly jittered copies ``F'``.

    Each trial draws from its own child of ``SeedSequence(seed)``, so the
    output depends only on ``seed`` and the trial position.
    """
    if not scale >= 0:
        raise DomainError(f"scale must be nonnegative, got {scale}")
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    base = magnitude_finite(F)
    out = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        for _ in range(MAX_RESAMPLES):
            noise = rng.uniform(-scale, scale, size=F.coords.shape) if scale > 0 else 0.0
            try:
                G = PointSet(F.coords + noise)
            except DuplicatePointError:
                continue
            break
        else:
            raise NumericalError(f"perturbation resampling failed {MAX_RESAMPLES} times in a row")
        out.append((hausdorff_distance(F, G), abs(base - magnitude_finite(G))))
    return out
