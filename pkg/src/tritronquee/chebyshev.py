"""Chebyshev collocation kernels on [-1, 1].

Grids use the Chebyshev-Lobatto points l_j = cos(j*pi/n), j = 0..n, ordered
from +1 down to -1.  The nodes are evaluated through the equivalent sine form
sin(pi*(n - 2j)/(2n)) so that the endpoints are exactly +-1 and the grid is
exactly symmetric.  Differentiation matrices follow the classic explicit
formula with the diagonal recomputed by the negative-sum trick; the second
derivative is the square of the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.fft import dct


@dataclass(frozen=True)
class ChebGrid:
    """Degree-n Chebyshev-Lobatto grid with differentiation matrices."""

    n: int
    points: np.ndarray  # (n+1,), decreasing from +1 to -1
    d1: np.ndarray      # (n+1, n+1) first derivative w.r.t. l
    d2: np.ndarray      # (n+1, n+1) second derivative, d1 @ d1

    @property
    def size(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class ChebCoeffs:
    """Coefficients c_0..c_n of a Chebyshev expansion sum c_m T_m(l)."""

    coeffs: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.coeffs)


@lru_cache(maxsize=None)
def make_grid(n: int) -> ChebGrid:
    """Build the degree-n grid; cached, arrays are read-only."""
    if n < 1:
        raise ValueError(f"grid degree must be >= 1, got {n}")
    j = np.arange(n + 1)
    points = np.sin(np.pi * (n - 2 * j) / (2 * n))
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    cs = c * (-1.0) ** j
    diff = points[:, None] - points[None, :] + np.eye(n + 1)
    d1 = np.outer(cs, 1.0 / cs) / diff
    np.fill_diagonal(d1, 0.0)
    np.fill_diagonal(d1, -d1.sum(axis=1))  # constants differentiate to exactly ~0
    d2 = d1 @ d1
    for arr in (points, d1, d2):
        arr.flags.writeable = False
    return ChebGrid(n=n, points=points, d1=d1, d2=d2)


@lru_cache(maxsize=None)
def _coeff_matrix(n: int) -> np.ndarray:
    """Matrix mapping nodal values to Chebyshev coefficients (DCT-I based)."""
    j = np.arange(n + 1)
    p = np.ones(n + 1)
    p[0] = p[-1] = 2.0
    mat = 2.0 * np.cos(np.outer(j, j) * np.pi / n) / (n * np.outer(p, p))
    mat.flags.writeable = False
    return mat


def to_coeffs(values, fast: bool = False) -> ChebCoeffs:
    """Chebyshev coefficients of the interpolant through nodal values.

    c_m = (2/(n*p_m)) * sum_j values_j cos(m*j*pi/n)/p_j with p_0 = p_n = 2,
    the exact inverse of evaluating sum c_m T_m at the nodes.  The direct
    O(n^2) product is the default; ``fast=True`` uses a DCT-I instead.
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim != 1 or len(values) < 2:
        raise ValueError("values must be a vector of at least 2 nodal samples")
    n = len(values) - 1
    if fast:
        p = np.ones(n + 1)
        p[0] = p[-1] = 2.0
        return ChebCoeffs(dct(values, type=1) / (n * p))
    return ChebCoeffs(_coeff_matrix(n) @ values)


def values_of(coeffs: ChebCoeffs) -> np.ndarray:
    """Nodal values sum_m c_m T_m(l_j) of a coefficient vector."""
    c = np.asarray(coeffs.coeffs, dtype=complex)
    n = len(c) - 1
    j = np.arange(n + 1)
    return np.cos(np.outer(j, j) * np.pi / n) @ c


@lru_cache(maxsize=None)
def _bary_weights(n: int) -> np.ndarray:
    """Barycentric weights for Chebyshev-Lobatto points: (-1)^j, halved at the ends."""
    w = (-1.0) ** np.arange(n + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    w.flags.writeable = False
    return w


def _interpolate(values: np.ndarray, l_star: complex) -> complex:
    """Barycentric evaluation of the interpolant at l_star (no range check)."""
    n = len(values) - 1
    nodes = make_grid(n).points
    d = l_star - nodes
    hit = np.abs(d) < 1e-15
    if np.any(hit):
        return complex(values[np.argmax(hit)])
    q = _bary_weights(n) / d
    return complex((q @ values) / q.sum())


def eval_at(values, l_star: float) -> complex:
    """Interpolate nodal values at l_star in [-1, 1] (barycentric, no extrapolation)."""
    values = np.asarray(values, dtype=complex)
    if values.ndim != 1 or len(values) < 2:
        raise ValueError("values must be a vector of at least 2 nodal samples")
    if not -1.0 <= l_star <= 1.0:
        raise ValueError(f"l_star = {l_star} outside [-1, 1]")
    return _interpolate(values, l_star)


class DecayDiagnostic(NamedTuple):
    saturation_index: int
    floor: float


def decay_diagnostic(coeffs: ChebCoeffs) -> DecayDiagnostic:
    """Locate where a coefficient sequence stops decaying.

    floor is the max modulus over the trailing 10% of the sequence; the
    saturation index is the smallest m with max_{k>=m} |c_k| <= 10*floor.
    """
    mags = np.abs(np.asarray(coeffs.coeffs))
    n_tail = max(1, int(np.ceil(0.1 * len(mags))))
    floor = float(mags[-n_tail:].max())
    suffix_max = np.maximum.accumulate(mags[::-1])[::-1]
    below = np.nonzero(suffix_max <= 10.0 * floor)[0]
    return DecayDiagnostic(saturation_index=int(below[0]), floor=floor)
