"""Dense complex linear algebra for the Newton step.

Backed by LAPACK (scipy): LU with partial pivoting for the solve and the
classic 1-norm estimator on the factors for the condition number.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor
from scipy.linalg import lu_solve as _lapack_lu_solve

from .errors import SingularMatrix

_PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major complex matrix."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=complex)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> np.ndarray:
        return self.data.ravel()


def _factor(a: DenseMatrix):
    if a.rows != a.cols:
        raise ValueError(f"matrix must be square, got {a.rows}x{a.cols}")
    with warnings.catch_warnings():
        # zero pivots are reported through SingularMatrix below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a.data, check_finite=False)
    if np.abs(np.diag(lu)).min() < _PIVOT_FLOOR:
        raise SingularMatrix("pivot magnitude below 1e-300")
    return lu, piv


def lu_solve(a: DenseMatrix, rhs) -> np.ndarray:
    """Solve a x = rhs by LU with partial pivoting."""
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape != (a.rows,):
        raise ValueError(f"rhs length {rhs.shape} does not match matrix size {a.rows}")
    return _lapack_lu_solve(_factor(a), rhs, check_finite=False)


def condition_estimate(a: DenseMatrix) -> float:
    """1-norm condition estimate from the LU factors (within ~10x of kappa_1)."""
    lu, _ = _factor(a)
    anorm = float(np.abs(a.data).sum(axis=0).max())
    if anorm == 0.0:
        raise SingularMatrix("zero matrix")
    rcond, info = lapack.zgecon(lu, anorm)
    if info != 0 or rcond == 0.0:
        raise SingularMatrix("condition estimate failed")
    return float(1.0 / rcond)
