"""Residuals, Jacobians and asymptotics for the Painleve-I boundary value problem.

Middle subdomains carry the equation d^2 Omega/dz^2 = 3*Omega^2 - z directly.
End domains are compactified by s = 1/sqrt(z) and solve for the regularised
remainder v = Omega - sigma*sqrt(z/3), which satisfies

    (s^7/4) v_ss + (3/4) s^6 v_s - 2*sigma*sqrt(3) v = 3 s v^2 + (sigma/(4*sqrt(3))) s^4.

At s = 0 (the point at infinity) every s-weighted term vanishes identically
and the collocation row degenerates to -2*sigma*sqrt(3)*v, which forces the
regular solution there without an explicit boundary condition.

All residual routines preserve the dtype of the unknown vector, so feeding
extended-precision values yields extended-precision residuals while the
operator matrices stay float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .chebyshev import ChebGrid, make_grid
from .complex_line import DomainLayout, LineSpec, s_edge_of, x_of_l_middle, z_of_x
from .dense_linear import DenseMatrix
from .errors import ZeroArgument

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class EndDomainOperator:
    """Collocation operator for one compactified end domain.

    Node 0 sits at the junction (s = s_edge), the last node at infinity
    (s = 0 exactly).  d1_s and d2_s differentiate with respect to s along
    the straight segment [0, s_edge].
    """

    side: Literal["left", "right"]
    s_edge: complex
    grid: ChebGrid
    s_values: np.ndarray
    d1_s: np.ndarray
    d2_s: np.ndarray


@dataclass(frozen=True)
class MiddleDomainOperator:
    """Collocation operator for one middle subdomain [x_a, x_b]."""

    x_a: float
    x_b: float
    grid: ChebGrid
    z_values: np.ndarray
    d1_z: np.ndarray
    d2_z: np.ndarray


@dataclass(frozen=True)
class AsymptoticSeries:
    """Coefficients a_1..a_K of Omega ~ sigma*sqrt(z/3) + sum a_k z^(-(5k-1)/2)."""

    sigma: int
    coeffs: np.ndarray


def end_domain_operator(line: LineSpec, layout: DomainLayout,
                        side: Literal["left", "right"]) -> EndDomainOperator:
    s_edge = s_edge_of(line, layout, side)
    n = layout.n_end_left if side == "left" else layout.n_end_right
    grid = make_grid(n)
    s_values = s_edge * (1.0 + grid.points) / 2.0
    scale = 2.0 / s_edge  # dl/ds along the straight segment
    d1_s = grid.d1 * scale
    d2_s = grid.d2 * scale**2
    return EndDomainOperator(side=side, s_edge=s_edge, grid=grid,
                             s_values=s_values, d1_s=d1_s, d2_s=d2_s)


def middle_domain_operator(line: LineSpec, layout: DomainLayout, k: int) -> MiddleDomainOperator:
    x_a, x_b = layout.middle_bounds(k)
    grid = make_grid(layout.n_middle[k])
    x_nodes = np.array([x_of_l_middle(layout, k, l) for l in grid.points])
    z_values = line.a * x_nodes + line.b
    scale = 2.0 / (line.a * (x_b - x_a))  # dl/dz
    d1_z = grid.d1 * scale
    d2_z = grid.d2 * scale**2
    return MiddleDomainOperator(x_a=x_a, x_b=x_b, grid=grid,
                                z_values=z_values, d1_z=d1_z, d2_z=d2_z)


def asymptotic_coefficients(sigma: int, big_k: int = 6) -> AsymptoticSeries:
    """Series coefficients by matching powers of z^(-1/2) in the equation.

    Substituting the ansatz reduces order by order to a linear recurrence:
    a_1 = -1/24 and, with e_j = -(5j-1)/2,

        a_k = [e_{k-1} (e_{k-1} - 1) a_{k-1} - 3 sum_{j=1}^{k-1} a_j a_{k-j}]
              / (2 sigma sqrt(3)).
    """
    if big_k < 1:
        raise ValueError(f"need at least one series term, got {big_k}")
    a = np.zeros(big_k + 1, dtype=complex)
    a[1] = -1.0 / 24.0
    for k in range(2, big_k + 1):
        e = -(5 * (k - 1) - 1) / 2.0
        conv = np.dot(a[1:k], a[k - 1:0:-1])
        a[k] = (e * (e - 1.0) * a[k - 1] - 3.0 * conv) / (2.0 * sigma * SQRT3)
    return AsymptoticSeries(sigma=sigma, coeffs=a[1:])


def asymptotic_eval(series: AsymptoticSeries, z):
    """Evaluate the truncated expansion at z (scalar or array), principal branch."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ZeroArgument("asymptotic expansion undefined at z = 0")
    out = series.sigma * np.sqrt(z / 3.0)
    for k, ak in enumerate(series.coeffs, start=1):
        out = out + ak * z ** (-(5 * k - 1) / 2.0)
    return out if out.shape else complex(out)


def residual_middle(op: MiddleDomainOperator, omega: np.ndarray) -> np.ndarray:
    """F = Omega_zz - 3*Omega^2 + z at the nodes."""
    omega = np.asarray(omega)
    if omega.shape != (op.grid.size,):
        raise ValueError(f"omega must have length {op.grid.size}, got {omega.shape}")
    return op.d2_z @ omega - 3.0 * omega**2 + op.z_values


def jacobian_middle(op: MiddleDomainOperator, omega: np.ndarray) -> DenseMatrix:
    omega = np.asarray(omega, dtype=complex)
    if omega.shape != (op.grid.size,):
        raise ValueError(f"omega must have length {op.grid.size}, got {omega.shape}")
    return DenseMatrix(op.d2_z - 6.0 * np.diag(omega))


def residual_end(op: EndDomainOperator, v: np.ndarray, sigma: int) -> np.ndarray:
    """Residual of the remainder equation at the nodes.

    At the s = 0 node all s-weighted factors are exact zeros, leaving
    -2*sigma*sqrt(3)*v there.
    """
    v = np.asarray(v)
    if v.shape != (op.grid.size,):
        raise ValueError(f"v must have length {op.grid.size}, got {v.shape}")
    s = op.s_values
    return ((s**7 / 4.0) * (op.d2_s @ v)
            + 0.75 * s**6 * (op.d1_s @ v)
            - 2.0 * sigma * SQRT3 * v
            - 3.0 * s * v**2
            - (sigma / (4.0 * SQRT3)) * s**4)


def jacobian_end(op: EndDomainOperator, v: np.ndarray, sigma: int) -> DenseMatrix:
    v = np.asarray(v, dtype=complex)
    if v.shape != (op.grid.size,):
        raise ValueError(f"v must have length {op.grid.size}, got {v.shape}")
    s = op.s_values
    jac = ((s**7 / 4.0)[:, None] * op.d2_s
           + (0.75 * s**6)[:, None] * op.d1_s
           - 2.0 * sigma * SQRT3 * np.eye(op.grid.size)
           - 6.0 * np.diag(s * v))
    return DenseMatrix(jac)


def omega_from_v(v_value: complex, s_value: complex, sigma: int,
                 line: LineSpec | None = None) -> complex:
    """Recover Omega = v + sigma*sqrt(z/3) from the remainder, using sqrt(z/3) = 1/(s*sqrt(3)).

    On the working branch z = 1/s^2, so s = 0 (the point at infinity) has no
    finite Omega and is rejected.  ``line`` is accepted for interface symmetry
    with the other conversions; the formula does not depend on it.
    """
    if s_value == 0:
        raise ZeroArgument("Omega is unbounded at infinity (s = 0)")
    return v_value + sigma / (s_value * SQRT3)


def domega_dx_end(v: np.ndarray, op: EndDomainOperator, sigma: int,
                  line: LineSpec, node: int = 0) -> complex:
    """dOmega/dx at an end-domain node (node 0 is the junction).

    Chain rule with ds/dz = -s^3/2 gives
    dOmega/dz = -(s^3/2) v_s + sigma*s/(2*sqrt(3)), and dOmega/dx = a*dOmega/dz.
    """
    v = np.asarray(v)
    if not 0 <= node < op.grid.size:
        raise IndexError(f"node {node} out of range for grid of size {op.grid.size}")
    s = op.s_values[node]
    v_s = op.d1_s[node, :] @ v
    return line.a * (-(s**3 / 2.0) * v_s + sigma * s / (2.0 * SQRT3))
