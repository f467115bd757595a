"""Closed-form magnitudes used as independent checks of the cube-union formula."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from maglab.errors import DomainError


def interval_union_magnitude(intervals: Sequence[tuple[float, float]]) -> float:
    """Magnitude of a disjoint union of closed intervals in R.

    ``1 + sum (b_i - a_i)/2 + sum tanh(gap_i / 2)`` over sorted, strictly
    separated intervals ``[a_i, b_i]``.
    """
    iv = [(float(a), float(b)) for a, b in intervals]
    if not iv:
        raise DomainError("need at least one interval")
    for a, b in iv:
        if not a <= b:
            raise DomainError(f"interval [{a}, {b}] has a > b")
    for (_, b0), (a1, _) in zip(iv, iv[1:]):
        if not b0 < a1:
            raise DomainError(f"intervals must be sorted with strict gaps: {b0} >= {a1}")
    lengths = sum(b - a for a, b in iv) / 2
    gaps = sum(np.tanh((a1 - b0) / 2) for (_, b0), (a1, _) in zip(iv, iv[1:]))
    return float(1 + lengths + gaps)


def _pair_term(norm1: float, n_axes: int, r: float) -> float:
    d = norm1 - 2 * n_axes * r
    e = np.exp(-d)
    return float(2 * (1 + r) ** n_axes - 2 * e / (1 + e))


def two_point_closed_form(p, r: float) -> float:
    """Magnitude of the two-cube union around ``{0, p}``, ``p`` with positive coordinates.

    ``r = 0`` gives the two-point magnitude ``2 / (1 + exp(-|p|_1))``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p <= 0):
        raise DomainError(f"p must have strictly positive coordinates, got {p.tolist()}")
    if not (0 <= r < p.min() / 2):
        raise DomainError(f"need 0 <= r < min(p)/2 = {p.min() / 2:g}, got r = {r:g}")
    return _pair_term(float(p.sum()), p.size, r)


def two_point_nonskew_closed_form(p, k: int, r: float) -> float:
    """Same as :func:`two_point_closed_form` for ``p = (p_1..p_k, 0..0)``.

    The union factors as the ``k``-dimensional skew pair times an
    ``(N - k)``-cube of magnitude ``(1 + r)^(N - k)``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    N = p.size
    if not 1 <= k <= N:
        raise DomainError(f"k must lie in [1, {N}], got {k}")
    head, tail = p[:k], p[k:]
    if np.any(head <= 0) or np.any(tail != 0):
        raise DomainError(f"expected k = {k} positive coordinates followed by zeros, got {p.tolist()}")
    if not (0 <= r < head.min() / 2):
        raise DomainError(f"need 0 <= r < {head.min() / 2:g}, got r = {r:g}")
    return _pair_term(float(head.sum()), k, r) * (1 + r) ** (N - k)


def pair_normal_form(x, y) -> np.ndarray:
    """Image of ``y - x`` under the reflection making every coordinate nonnegative."""
    return np.abs(np.asarray(y, dtype=float) - np.asarray(x, dtype=float))
