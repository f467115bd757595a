"""Finite subsets of l1^N: distances, skewness, weightings and magnitude."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from maglab.errors import DimensionMismatchError, DuplicatePointError, InputError
from maglab.linalg import solve_spd

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PointSet:
    """An ordered, duplicate-free list of ``m >= 1`` points in R^N.

    ``coords`` is stored as a read-only ``(m, N)`` float array; the input
    order is kept and every matrix built from the set follows it.
    """

    coords: np.ndarray

    def __post_init__(self):
        try:
            a = np.array(self.coords, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"points are not a rectangular numeric array: {exc}") from None
        if a.ndim == 1:
            a = a.reshape(-1, 1) if a.size else a.reshape(0, 0)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InputError(f"expected m >= 1 points with N >= 1 coordinates, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("point coordinates must be finite")
        uniq, inverse, counts = np.unique(a, axis=0, return_inverse=True, return_counts=True)
        if uniq.shape[0] != a.shape[0]:
            dup = int(np.flatnonzero(counts > 1)[0])
            rows = np.flatnonzero(inverse.ravel() == dup)
            raise DuplicatePointError(
                f"duplicate point {a[rows[0]].tolist()} at rows {rows.tolist()}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "coords", a)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    @property
    def m(self) -> int:
        return self.coords.shape[0]

    def __len__(self):
        return self.m

    def __getitem__(self, i) -> np.ndarray:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        return isinstance(other, PointSet) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.coords.shape, self.coords.tobytes()))

    def __repr__(self):
        return f"PointSet({self.coords.tolist()})"

    def subset(self, indices: Iterable[int]) -> "PointSet":
        return PointSet(self.coords[list(indices)])

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.coords.tolist()}


def _check_dims(x, y):
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatchError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")


def d1(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dims(x, y)
    return float(np.sum(np.abs(x - y)))


def pairwise_d1(X, Y) -> np.ndarray:
    """Matrix of 1-distances between rows of ``X`` and rows of ``Y``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    _check_dims(X, Y)
    return np.abs(X[:, None, :] - Y[None, :, :]).sum(axis=-1)


def cube_point_distance(center, r: float, x) -> float:
    """1-distance from ``x`` to the axis-parallel cube of half-width ``r`` at ``center``."""
    if not r > 0:
        raise InputError(f"cube radius must be positive, got {r}")
    c = np.asarray(center, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_dims(c, x)
    return float(np.sum(np.maximum(np.abs(x - c) - r, 0.0)))


def skewness(F: PointSet, tol: float = 0.0) -> float:
    """Smallest coordinate gap between distinct points, ``inf`` for a singleton.

    Gaps ``<= tol`` count as coincident coordinates, so a positive ``tol``
    reports near-skew sets as non-skew (returns 0).
    """
    if F.m == 1:
        return float("inf")
    X = F.coords
    i, j = np.triu_indices(F.m, k=1)
    s = float(np.min(np.abs(X[i] - X[j])))
    return 0.0 if s <= tol else s


def is_skew(F: PointSet, tol: float = 0.0) -> bool:
    return skewness(F, tol) > 0


def hausdorff_distance(F: PointSet, G: PointSet) -> float:
    D = pairwise_d1(F.coords, G.coords)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def similarity_matrix(F: PointSet) -> np.ndarray:
    return np.exp(-pairwise_d1(F.coords, F.coords))


@dataclass(frozen=True)
class Weighting:
    values: np.ndarray
    residual: float
    tol: float

    @property
    def total(self) -> float:
        return float(np.sum(self.values))


def weighting(F: PointSet, tol: Optional[float] = None) -> Weighting:
    """Solve ``Z_F w = 1``.

    Raises :class:`~maglab.errors.ResidualError` when the relative residual
    exceeds ``tol`` (default :data:`RESIDUAL_TOL`).
    """
    tol = RESIDUAL_TOL if tol is None else tol
    rep = solve_spd(similarity_matrix(F), np.ones(F.m), tol=tol)
    vals = rep.solution
    vals.setflags(write=False)
    return Weighting(vals, rep.relative_residual, tol)


def magnitude_finite(F: PointSet, tol: Optional[float] = None) -> float:
    return weighting(F, tol).total


def product_space(F: PointSet, G: PointSet) -> PointSet:
    """l1-product: all concatenations ``(p, q)``, ``F`` index varying slowest."""
    rows = [np.concatenate([p, q]) for p, q in itertools.product(F.coords, G.coords)]
    return PointSet(np.array(rows))
