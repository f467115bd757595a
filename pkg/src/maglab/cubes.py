"""Weight measure and magnitude of a union of equal cubes around a skew point set.

Notation: ``F`` has ``m`` points in R^N; the cube around ``p`` is
``prod_k [p_k - r, p_k + r]`` with the 1-metric.  Unknowns and equations are
indexed by ``(point index, sign vector)`` in canonical order: points as given,
sign vectors lexicographic with -1 before +1.  Row ``i * 2**N + j`` belongs to
point ``i`` and ``sign_vectors(N)[j]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional

import numpy as np

from maglab.errors import DimensionMismatchError, NotSkewError, NumericalError, RadiusError
from maglab.linalg import EXTENDED, solve_general, solve_spd
from maglab.metric import RESIDUAL_TOL, PointSet, is_skew, pairwise_d1, skewness, weighting

CROSS_TOL = 1e-8
SWITCH_FRACTION = 1 / 20
LIMIT_IDENTITY_TOL = 1e-12

Method = Literal["vertex", "corner", "auto"]


@lru_cache(maxsize=None)
def _signs(N: int) -> np.ndarray:
    S = np.array(list(itertools.product((-1, 1), repeat=N)), dtype=float)
    S.setflags(write=False)
    return S


def sign_vectors(N: int) -> list[tuple[int, ...]]:
    return list(itertools.product((-1, 1), repeat=N))


def sign_index(u) -> int:
    """Position of a sign vector in canonical order (binary, -1 -> 0, +1 -> 1)."""
    idx = 0
    for v in u:
        if v not in (-1, 1):
            raise ValueError(f"sign vector entries must be +-1, got {tuple(u)}")
        idx = 2 * idx + (v > 0)
    return idx


@dataclass(frozen=True)
class CubeUnionSpec:
    base: PointSet
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not (np.isfinite(r) and r > 0):
            raise RadiusError(f"radius must be positive and finite, got {self.radius}")
        sk = skewness(self.base)
        if not r < sk / 2:
            raise RadiusError(
                f"radius exceeds skew(F)/2: r = {r:g}, skew(F) = {sk:g}, bound {sk / 2:g}"
            )
        object.__setattr__(self, "radius", r)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def order(self) -> int:
        return self.m * 2**self.dim

    def index(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(i, s) for i in range(self.m) for s in sign_vectors(self.dim)]

    def vertices(self, dtype=float) -> np.ndarray:
        """All cube vertices ``p + r s`` as an ``(m 2^N, N)`` array in canonical order."""
        S = _signs(self.dim).astype(dtype)
        C = self.base.coords.astype(dtype)
        return (C[:, None, :] + dtype(self.radius) * S[None, :, :]).reshape(-1, self.dim)


def _require_skew(F: PointSet):
    if not is_skew(F):
        raise NotSkewError(f"point set is not skew (skew(F) = {skewness(F):g})")


def _corner_codes(F: PointSet) -> np.ndarray:
    """``codes[q, p]`` = canonical index of ``sgn(p - q)``; -1 on the diagonal."""
    D = np.sign(F.coords[None, :, :] - F.coords[:, None, :])
    weights = 2 ** np.arange(F.dim - 1, -1, -1)
    codes = ((D > 0).astype(int) * weights).sum(axis=-1)
    np.fill_diagonal(codes, -1)
    return codes


def corner(F: PointSet, q: int, u) -> tuple[int, ...]:
    """Indices of the points of ``F`` in the open orthant ``u`` seen from point ``q``."""
    _require_skew(F)
    u = tuple(int(v) for v in u)
    if len(u) != F.dim:
        raise ValueError(f"sign vector has {len(u)} entries, expected {F.dim}")
    j = sign_index(u)
    return tuple(int(p) for p in np.flatnonzero(_corner_codes(F)[q] == j))


def corner_partition_check(F: PointSet, q: int) -> bool:
    _require_skew(F)
    seen: list[int] = []
    for u in sign_vectors(F.dim):
        seen.extend(corner(F, q, u))
    return len(seen) == len(set(seen)) and set(seen) == set(range(F.m)) - {q}


def vertex_matrix(spec: CubeUnionSpec, dtype=float) -> np.ndarray:
    V = spec.vertices(dtype)
    return np.exp(-np.abs(V[:, None, :] - V[None, :, :]).sum(axis=-1))


def _cube_distances(spec: CubeUnionSpec, X: np.ndarray) -> np.ndarray:
    """``out[p, j]`` = 1-distance from point ``X[j]`` to the cube around ``F[p]``."""
    C = spec.base.coords.astype(X.dtype)
    gap = np.abs(X[None, :, :] - C[:, None, :]) - X.dtype.type(spec.radius)
    return np.maximum(gap, 0).sum(axis=-1)


def _owner(spec: CubeUnionSpec) -> np.ndarray:
    return np.repeat(np.arange(spec.m), 2**spec.dim)


def vertex_system(spec: CubeUnionSpec, dtype=float) -> tuple[np.ndarray, np.ndarray]:
    """Similarity matrix of the vertices and the summed ``exp(-d(cube_p, vertex))`` RHS."""
    Z = vertex_matrix(spec, dtype)
    E = np.exp(-_cube_distances(spec, spec.vertices(dtype)))
    E[_owner(spec), np.arange(spec.order)] = 0.0
    return Z, E.sum(axis=0)


def corner_system(spec: CubeUnionSpec, dtype=float) -> tuple[np.ndarray, np.ndarray]:
    """Block-sparse system coupling each vertex only to the cubes in its corner."""
    _require_skew(spec.base)
    Z = vertex_matrix(spec, dtype)
    E = np.exp(-_cube_distances(spec, spec.vertices(dtype)))
    n, k = spec.order, 2**spec.dim
    B = np.eye(n, dtype=dtype)
    rhs = np.zeros(n, dtype=dtype)
    codes = _corner_codes(spec.base)
    for q in range(spec.m):
        for p in range(spec.m):
            if p == q:
                continue
            row = q * k + codes[q, p]
            cols = slice(p * k, (p + 1) * k)
            B[row, cols] = Z[row, cols]
            rhs[row] += E[p, row]
    return B, rhs


def structural_zeros(spec: CubeUnionSpec) -> np.ndarray:
    """Mask of unknowns whose corner is empty; the Corner System pins these to 0."""
    k = 2**spec.dim
    mask = np.ones(spec.order, dtype=bool)
    if spec.m > 1:
        codes = _corner_codes(spec.base)
        for q in range(spec.m):
            for p in range(spec.m):
                if p != q:
                    mask[q * k + codes[q, p]] = False
    return mask


def _rel_residual(A, x, b) -> float:
    res = float(np.max(np.abs(A @ x - b)))
    bn = float(np.max(np.abs(b)))
    return res / bn if bn > 0 else res


@dataclass(frozen=True)
class AlphaTable:
    spec: CubeUnionSpec
    values: np.ndarray
    system_used: Literal["vertex", "corner"]
    residual: float
    cross_residual: float
    condition_estimate: Optional[float] = None
    structural_zero: np.ndarray = field(default=None, repr=False)

    def value(self, point: int, s) -> float:
        return float(self.values[point * 2**self.spec.dim + sign_index(s)])

    def by_point(self) -> np.ndarray:
        """``(m, 2^N)`` view; row ``i`` lists the alphas at the vertices of cube ``i``."""
        return self.values.reshape(self.spec.m, 2**self.spec.dim)

    def total(self) -> float:
        """Sum of the alphas, with structurally zero entries taken as exactly 0."""
        return float(np.sum(self.values[~self.structural_zero]))

    def to_dict(self) -> dict:
        return {
            "r": self.spec.radius,
            "order": [[i, list(s)] for i, s in self.spec.index()],
            "alpha": self.values.tolist(),
            "system": self.system_used,
            "residual": self.residual,
            "cross_residual": self.cross_residual,
        }


def switch_radius(F: PointSet) -> float:
    return skewness(F) * SWITCH_FRACTION


def alphas(
    spec: CubeUnionSpec,
    method: Method = "auto",
    tol: Optional[float] = None,
    cross_tol: Optional[float] = None,
) -> AlphaTable:
    """Vertex-correction coefficients of the cube-union weight measure.

    ``auto`` uses the Corner System below :func:`switch_radius` (where the
    Vertex matrix approaches a rank-deficient limit) and the SPD Vertex System
    otherwise.  The solution is substituted into the other system as well;
    disagreement above ``cross_tol`` raises :class:`NumericalError`.
    Both solves are refined against long-double copies of their systems.
    """
    tol = RESIDUAL_TOL if tol is None else tol
    cross_tol = CROSS_TOL if cross_tol is None else cross_tol
    if method == "auto":
        method = "corner" if spec.radius < switch_radius(spec.base) else "vertex"
    Zv, bv = vertex_system(spec)
    Bc, bc = corner_system(spec)
    if method == "vertex":
        rep = solve_spd(Zv, bv, tol=tol, hi=vertex_system(spec, EXTENDED))
        cross = _rel_residual(Bc, rep.solution, bc)
    elif method == "corner":
        rep = solve_general(Bc, bc, tol=tol, hi=corner_system(spec, EXTENDED))
        cross = _rel_residual(Zv, rep.solution, bv)
    else:
        raise ValueError(f"unknown method {method!r}")
    if cross > cross_tol:
        raise NumericalError(
            f"{method} solution fails the other system: relative residual {cross:.3e} > {cross_tol:.1e}"
        )
    vals = rep.solution
    vals.setflags(write=False)
    return AlphaTable(
        spec, vals, method, rep.relative_residual, cross, rep.condition_estimate, structural_zeros(spec)
    )


def cube_union_magnitude(spec: CubeUnionSpec, method: Method = "auto", **kw) -> float:
    return weight_measure(spec, alphas(spec, method, **kw)).total_mass


@dataclass(frozen=True)
class WeightMeasure:
    """Lebesgue skeleton part (kept symbolic) plus Dirac corrections at vertices.

    The skeleton part is ``2^-N`` times the sum of all face measures of all
    cubes; it is characterised by its centers, radius and total mass.
    """

    spec: CubeUnionSpec
    lebesgue_coefficient: float
    lebesgue_total_mass: float
    dirac_points: np.ndarray
    dirac_coefficients: np.ndarray

    @property
    def dirac_corrections(self) -> list[tuple[np.ndarray, float]]:
        return list(zip(self.dirac_points, self.dirac_coefficients.tolist()))

    @property
    def total_mass(self) -> float:
        return float(self.lebesgue_coefficient * self.lebesgue_total_mass + np.sum(self.dirac_coefficients))

    def to_dict(self) -> dict:
        return {
            "lebesgue": {
                "coefficient": self.lebesgue_coefficient,
                "centers": self.spec.base.coords.tolist(),
                "radius": self.spec.radius,
                "total_mass": self.lebesgue_total_mass,
            },
            "dirac": [
                {"at": p.tolist(), "coefficient": c}
                for p, c in zip(self.dirac_points, self.dirac_coefficients.tolist())
            ],
        }


def weight_measure(spec: CubeUnionSpec, table: Optional[AlphaTable] = None) -> WeightMeasure:
    """Assemble the weight measure; vertices with an empty corner carry no Dirac mass."""
    if table is None:
        table = alphas(spec)
    keep = ~table.structural_zero
    N = spec.dim
    return WeightMeasure(
        spec=spec,
        lebesgue_coefficient=2.0**-N,
        lebesgue_total_mass=spec.m * (2 + 2 * spec.radius) ** N,
        dirac_points=spec.vertices()[keep],
        dirac_coefficients=-table.values[keep],
    )


def interval_kernel_integral(b, r, a):
    """Integral of ``exp(-|x - a|)`` over ``[b - r, b + r]`` (vectorised)."""
    b, a = np.broadcast_arrays(np.asarray(b, dtype=float), np.asarray(a, dtype=float))
    t = np.abs(b - a)
    far = 2.0 * np.exp(-t) * np.sinh(r)
    near = 2.0 * (1.0 - np.exp(-r) * np.cosh(b - a))
    return np.where(t >= r, far, near)


def weight_integral(W: WeightMeasure, a) -> float | np.ndarray:
    """Integrate ``exp(-d_1(x, a))`` against ``W``; accepts one point or an ``(n, N)`` array."""
    a = np.asarray(a, dtype=float)
    single = a.ndim == 1
    A = np.atleast_2d(a)
    if A.shape[1] != W.spec.dim:
        raise DimensionMismatchError(f"point of dimension {A.shape[1]} for a cube union in R^{W.spec.dim}")
    C = W.spec.base.coords
    r = W.spec.radius
    diff = C[:, None, :] - A[None, :, :]  # (m, n, N)
    per_axis = (
        np.exp(-np.abs(diff - r))
        + np.exp(-np.abs(diff + r))
        + interval_kernel_integral(C[:, None, :], r, A[None, :, :])
    )
    skeleton = W.lebesgue_coefficient * np.prod(per_axis, axis=-1).sum(axis=0)
    if W.dirac_points.size:
        dirac = np.exp(-pairwise_d1(W.dirac_points, A)).T @ W.dirac_coefficients
    else:
        dirac = 0.0
    out = skeleton + dirac
    return float(out[0]) if single else out


@dataclass(frozen=True)
class LimitTable:
    base: PointSet
    alpha0: np.ndarray
    sigma0: np.ndarray
    weights: np.ndarray

    def value(self, point: int, s) -> float:
        return float(self.alpha0[point * 2**self.base.dim + sign_index(s)])

    @property
    def magnitude_limit(self) -> float:
        return float(self.base.m - np.sum(self.alpha0))


def alpha_limits(F: PointSet, tol: Optional[float] = None) -> LimitTable:
    """Closed-form ``r -> 0`` limits of the alphas from the weighting of ``F``."""
    _require_skew(F)
    w = weighting(F, tol).values
    k = 2**F.dim
    a0 = np.zeros(F.m * k)
    if F.m > 1:
        codes = _corner_codes(F)
        Z = np.exp(-pairwise_d1(F.coords, F.coords))
        for q in range(F.m):
            for p in range(F.m):
                if p != q:
                    a0[q * k + codes[q, p]] += Z[q, p] * w[p]
    sigma = a0.reshape(F.m, k).sum(axis=1)
    gap = abs(float(np.sum(a0)) - (F.m - float(np.sum(w))))
    if gap > LIMIT_IDENTITY_TOL * max(1, F.m):
        raise NumericalError(f"limit alphas do not sum to m - mg(F): discrepancy {gap:.3e}")
    a0.setflags(write=False)
    return LimitTable(F, a0, sigma, w)
