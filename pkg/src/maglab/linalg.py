"""Small dense solvers: Cholesky with LU fallback, log-determinants, 1-norm conditioning.

LAPACK (through scipy) does the factorizations; this module adds the residual
bookkeeping, singularity threshold and log-space determinant that the rest of
the package relies on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
import scipy.linalg as la
from scipy.linalg import lapack

from maglab.errors import ResidualError, SingularMatrixError

SYMMETRY_TOL = 1e-12
PIVOT_TOL = 1e-14
MAX_REFINE_STEPS = 8
EXTENDED = np.longdouble


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    residual_inf: float
    method: Literal["cholesky", "lu"]
    condition_estimate: Optional[float] = None  # None means "not computed"
    rhs_inf: float = 0.0
    refined: bool = False

    @property
    def relative_residual(self) -> float:
        """Residual scaled by ``||b||_inf`` (absolute when ``b == 0``)."""
        if self.rhs_inf > 0:
            return self.residual_inf / self.rhs_inf
        return self.residual_inf


@dataclass(frozen=True)
class LogDet:
    sign: int
    log_abs: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * float(np.exp(self.log_abs))


def _as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _as_rhs(A: np.ndarray, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.shape != (A.shape[0],):
        raise ValueError(f"rhs of shape {b.shape} does not match matrix of order {A.shape[0]}")
    return b


def _residual(A, x, b) -> float:
    if A.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(A @ x - b)))


def _relative(res, b) -> float:
    bn = float(np.max(np.abs(b))) if b.size else 0.0
    return res / bn if bn > 0 else res


def _lu(A: np.ndarray):
    """Partial-pivot LU; raises when a pivot falls below PIVOT_TOL times the row scale."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        with np.errstate(all="ignore"):
            lu, piv = la.lu_factor(A, check_finite=False)
    scale = float(np.max(np.abs(A))) if A.size else 1.0
    pivots = np.abs(np.diag(lu))
    if np.any(pivots <= PIVOT_TOL * scale):
        k = int(np.argmin(pivots))
        raise SingularMatrixError(
            f"matrix is numerically singular: pivot {k} = {pivots[k]:.3e} (scale {scale:.3e})"
        )
    return lu, piv


def _refine_extended(hi, x, correct):
    """Mixed-precision refinement: residuals of the extended-precision system
    ``hi = (A, b)``, corrections from the float64 factorization.

    Stops once a correction no longer moves ``x`` or stops shrinking.
    """
    A_hi, b_hi = hi
    eps = np.finfo(float).eps
    last = np.inf
    for _ in range(MAX_REFINE_STEPS):
        r = b_hi - A_hi @ x.astype(EXTENDED)
        dx = correct(r.astype(float))
        step = float(np.max(np.abs(dx)))
        if not step < last:
            break
        x = x + dx
        last = step
        if step <= eps * float(np.max(np.abs(x))):
            break
    return x


def _finish(A, b, x, method, cond, tol, refine, hi=None):
    refined = False
    if hi is not None:
        x = _refine_extended(hi, x, refine)
        refined = True
    res = _residual(A, x, b)
    if tol is not None and _relative(res, b) > tol:
        x = x + refine(b - A @ x)
        res = _residual(A, x, b)
        refined = True
        if _relative(res, b) > tol:
            raise ResidualError(_relative(res, b), tol, f"{method} solve")
    bn = float(np.max(np.abs(b))) if b.size else 0.0
    return SolveReport(x, res, method, cond, bn, refined)


def _as_hi(A, b, hi):
    if hi is None:
        return None
    A_hi = np.asarray(hi[0], dtype=EXTENDED)
    b_hi = np.asarray(hi[1], dtype=EXTENDED)
    if A_hi.shape != A.shape or b_hi.shape != b.shape:
        raise ValueError("extended-precision system does not match the float64 one")
    return A_hi, b_hi


def solve_general(A, b, tol: Optional[float] = None, hi=None) -> SolveReport:
    """Solve ``A x = b`` by partial-pivot LU.

    ``tol`` bounds the relative residual ``||Ax - b||_inf / ||b||_inf``; one
    refinement step is tried before :class:`ResidualError` is raised.
    ``hi`` optionally holds the same system in long double; residuals are
    then taken there and the solution refined until it stops improving.
    """
    A = _as_square(A)
    b = _as_rhs(A, b)
    if A.shape[0] == 0:
        return SolveReport(np.zeros(0), 0.0, "lu", 1.0)
    lu, piv = _lu(A)
    x = la.lu_solve((lu, piv), b, check_finite=False)
    cond = _gecon(A, lu)
    correct = lambda rhs: la.lu_solve((lu, piv), rhs, check_finite=False)  # noqa: E731
    return _finish(A, b, x, "lu", cond, tol, correct, _as_hi(A, b, hi))


def solve_spd(A, b, tol: Optional[float] = None, hi=None) -> SolveReport:
    """Solve a symmetric positive definite system by Cholesky.

    If the factorization breaks down the system is handed to
    :func:`solve_general` and the report says ``method="lu"``.
    """
    A = _as_square(A)
    b = _as_rhs(A, b)
    asym = float(np.max(np.abs(A - A.T))) if A.size else 0.0
    if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(A))) if A.size else 1.0):
        raise ValueError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    if A.shape[0] == 0:
        return SolveReport(np.zeros(0), 0.0, "cholesky", 1.0)
    try:
        c = la.cho_factor(A, lower=False, check_finite=False)
    except la.LinAlgError:
        return solve_general(A, b, tol, hi)
    x = la.cho_solve(c, b, check_finite=False)
    cond = _from_rcond(*lapack.dpocon(c[0], _norm1(A), uplo="U"))
    correct = lambda rhs: la.cho_solve(c, rhs, check_finite=False)  # noqa: E731
    return _finish(A, b, x, "cholesky", cond, tol, correct, _as_hi(A, b, hi))


def _norm1(A) -> float:
    return float(np.max(np.sum(np.abs(A), axis=0)))


def _from_rcond(rcond, info) -> float:
    if info != 0 or rcond <= 0:
        return float("inf")
    return max(1.0, 1.0 / rcond)  # kappa >= 1; the estimate can round just below


def _gecon(A, lu) -> float:
    return _from_rcond(*lapack.dgecon(lu, _norm1(A), norm="1"))


def condition_estimate_1norm(A) -> float:
    """LAPACK estimate of ``||A||_1 ||A^-1||_1`` from the LU factors; ``inf`` if singular."""
    A = _as_square(A)
    if A.shape[0] == 0:
        return 1.0
    try:
        lu, _ = _lu(A)
    except SingularMatrixError:
        return float("inf")
    return _gecon(A, lu)


def log_determinant(A) -> LogDet:
    """Sign and ``log|det A|`` accumulated from the LU pivots.

    Working in log space keeps tiny determinants (``det ~ r^k`` with large
    ``k``) representable.  A numerically singular matrix gives ``sign == 0``.
    """
    A = _as_square(A)
    n = A.shape[0]
    if n == 0:
        return LogDet(1, 0.0)
    try:
        lu, piv = _lu(A)
    except SingularMatrixError:
        return LogDet(0, float("-inf"))
    d = np.diag(lu)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    sign = (-1) ** swaps * int(np.prod(np.sign(d)))
    return LogDet(int(sign), float(np.sum(np.log(np.abs(d)))))
