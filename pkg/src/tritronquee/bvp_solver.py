"""Global assembly, junction conditions and Newton iteration.

The unknown vector concatenates the remainder v on the left end domain, Omega
on each middle subdomain and v on the right end domain.  The ODE collocation
rows are block diagonal; coupling enters only through the C^1 junction
conditions, which replace one row per block and junction (Lanczos tau method):
the value-continuity equation lands on the end/left block's junction row, the
x-derivative-continuity equation on the middle/right block's junction row.

The Newton iterate is kept in extended precision (clongdouble) and the
residual is accumulated in extended precision as well, while the Jacobian and
its LU solve stay in float64.  At N_c = 256 the float64 rounding floor of the
residual sits a factor of a few above the default 1e-10 stopping tolerance;
the extended iterate pushes the floor to ~1e-13 so the iteration stops on the
tolerance rather than on rounding noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .chebyshev import ChebCoeffs, _interpolate, make_grid, to_coeffs
from .complex_line import DomainLayout, LineSpec, sqrt_branch, validate_line
from .dense_linear import DenseMatrix, condition_estimate, lu_solve
from .errors import SectorViolation, SingularJacobian, SingularMatrix
from .painleve_model import (
    SQRT3,
    EndDomainOperator,
    MiddleDomainOperator,
    asymptotic_coefficients,
    asymptotic_eval,
    domega_dx_end,
    end_domain_operator,
    jacobian_end,
    jacobian_middle,
    middle_domain_operator,
    omega_from_v,
    residual_end,
    residual_middle,
)

_STATE_DTYPE = np.clongdouble
_MAX_HALVINGS = 10


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-10
    max_iterations: int = 25
    damping: bool = True
    series_terms: int = 6

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.series_terms < 1:
            raise ValueError("series_terms must be >= 1")


@dataclass(frozen=True)
class SolveState:
    """Per-domain unknown vectors with their offsets in the global vector."""

    blocks: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    offsets: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.offsets[-1] + len(self.blocks[-1])

    def vector(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    def with_vector(self, u: np.ndarray) -> "SolveState":
        blocks = tuple(
            np.array(u[off:off + len(blk)])
            for off, blk in zip(self.offsets, self.blocks)
        )
        return replace(self, blocks=blocks)

    def block(self, label: str) -> np.ndarray:
        return self.blocks[self.labels.index(label)]


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    residual_history: list[float]
    final_residual: float
    junction_value_mismatch: list[float]
    junction_deriv_mismatch: list[float]
    coeff_spectra: dict[str, ChebCoeffs]
    jacobian_condition: float
    damping_halvings: int = 0
    ode_residual_refined: float = float("nan")


@dataclass(frozen=True)
class DomainOperators:
    """All per-domain collocation operators of one layout, in block order."""

    line: LineSpec
    layout: DomainLayout
    end_left: EndDomainOperator
    middles: tuple[MiddleDomainOperator, ...]
    end_right: EndDomainOperator
    labels: tuple[str, ...] = field(init=False)
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if len(self.middles) == 1:
            mid_labels = ("II",)
        else:
            mid_labels = tuple(f"II_{k + 1}" for k in range(len(self.middles)))
        labels = ("I", *mid_labels, "III")
        sizes = [self.end_left.grid.size]
        sizes += [op.grid.size for op in self.middles]
        sizes += [self.end_right.grid.size]
        offsets = tuple(int(o) for o in np.concatenate(([0], np.cumsum(sizes[:-1]))))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "offsets", offsets)

    @property
    def size(self) -> int:
        return self.offsets[-1] + self.end_right.grid.size


def build_operators(line: LineSpec, layout: DomainLayout) -> DomainOperators:
    return DomainOperators(
        line=line,
        layout=layout,
        end_left=end_domain_operator(line, layout, "left"),
        middles=tuple(middle_domain_operator(line, layout, k)
                      for k in range(len(layout.n_middle))),
        end_right=end_domain_operator(line, layout, "right"),
    )


def initial_iterate(line: LineSpec, layout: DomainLayout, series_terms: int = 6) -> SolveState:
    """Start vector: v = 0 on the end domains, a straight line in x between the
    truncated-series values at the two outer junctions on the middle domains."""
    ops = build_operators(line, layout)
    series = asymptotic_coefficients(line.sigma, series_terms)
    om_l = asymptotic_eval(series, line.a * layout.x_l + line.b)
    om_r = asymptotic_eval(series, line.a * layout.x_r + line.b)
    slope = (om_r - om_l) / (layout.x_r - layout.x_l)
    blocks = [np.zeros(ops.end_left.grid.size, dtype=_STATE_DTYPE)]
    for op in ops.middles:
        x_nodes = (op.x_a * (1.0 - op.grid.points) + op.x_b * (1.0 + op.grid.points)) / 2.0
        blocks.append((om_l + slope * (x_nodes - layout.x_l)).astype(_STATE_DTYPE))
    blocks.append(np.zeros(ops.end_right.grid.size, dtype=_STATE_DTYPE))
    return SolveState(blocks=tuple(blocks), labels=ops.labels, offsets=ops.offsets)


def _junction_rows(ops: DomainOperators):
    """(value_row, deriv_row, descriptor) per junction, left to right.

    Row indices are global.  Descriptors carry what each row couples so the
    residual/Jacobian assembly and the post-solve mismatch measurement share
    one source of truth.
    """
    n_mid = len(ops.middles)
    off_I = ops.offsets[0]
    off_m = list(ops.offsets[1:1 + n_mid])
    off_III = ops.offsets[-1]
    rows = []
    # outer left: value on end block I, derivative on middle block 0
    rows.append(("outer", "left", off_I + 0, off_m[0] + ops.middles[0].grid.n))
    # internal splits: value on left middle block, derivative on right middle block
    for j in range(n_mid - 1):
        rows.append(("split", j, off_m[j] + 0, off_m[j + 1] + ops.middles[j + 1].grid.n))
    # outer right: value on end block III, derivative on middle block -1
    rows.append(("outer", "right", off_III + 0, off_m[-1] + 0))
    return rows


def _residual_vector(ops: DomainOperators, state: SolveState) -> np.ndarray:
    line, sigma = ops.line, ops.line.sigma
    n_mid = len(ops.middles)
    v_l = state.blocks[0]
    mids = state.blocks[1:1 + n_mid]
    v_r = state.blocks[-1]

    parts = [residual_end(ops.end_left, v_l, sigma)]
    parts += [residual_middle(op, om) for op, om in zip(ops.middles, mids)]
    parts.append(residual_end(ops.end_right, v_r, sigma))
    F = np.concatenate(parts).astype(_STATE_DTYPE)

    for kind, which, value_row, deriv_row in _junction_rows(ops):
        if kind == "outer":
            end_op = ops.end_left if which == "left" else ops.end_right
            v_end = v_l if which == "left" else v_r
            mid_idx = 0 if which == "left" else n_mid - 1
            mid_node = ops.middles[mid_idx].grid.n if which == "left" else 0
            om = mids[mid_idx]
            F[value_row] = (v_end[0] + sigma / (end_op.s_edge * SQRT3)) - om[mid_node]
            F[deriv_row] = (
                line.a * (-(end_op.s_edge**3 / 2.0) * (end_op.d1_s[0, :] @ v_end)
                          + sigma * end_op.s_edge / (2.0 * SQRT3))
                - line.a * (ops.middles[mid_idx].d1_z[mid_node, :] @ om)
            )
        else:
            j = which
            left, right = ops.middles[j], ops.middles[j + 1]
            F[value_row] = mids[j][0] - mids[j + 1][right.grid.n]
            F[deriv_row] = (line.a * (left.d1_z[0, :] @ mids[j])
                            - line.a * (right.d1_z[right.grid.n, :] @ mids[j + 1]))
    return F


def _jacobian_matrix(ops: DomainOperators, state: SolveState) -> np.ndarray:
    line, sigma = ops.line, ops.line.sigma
    n_mid = len(ops.middles)
    blocks = [blk.astype(complex) for blk in state.blocks]
    v_l, mids, v_r = blocks[0], blocks[1:1 + n_mid], blocks[-1]

    J = np.zeros((ops.size, ops.size), dtype=complex)
    off = ops.offsets
    J[off[0]:off[0] + len(v_l), off[0]:off[0] + len(v_l)] = \
        jacobian_end(ops.end_left, v_l, sigma).data
    for k, (op, om) in enumerate(zip(ops.middles, mids)):
        o = off[1 + k]
        J[o:o + len(om), o:o + len(om)] = jacobian_middle(op, om).data
    o = off[-1]
    J[o:o + len(v_r), o:o + len(v_r)] = jacobian_end(ops.end_right, v_r, sigma).data

    for kind, which, value_row, deriv_row in _junction_rows(ops):
        J[value_row, :] = 0.0
        J[deriv_row, :] = 0.0
        if kind == "outer":
            end_off = off[0] if which == "left" else off[-1]
            end_op = ops.end_left if which == "left" else ops.end_right
            mid_idx = 0 if which == "left" else n_mid - 1
            mid_off = off[1 + mid_idx]
            mid_op = ops.middles[mid_idx]
            mid_node = mid_op.grid.n if which == "left" else 0
            J[value_row, end_off] = 1.0
            J[value_row, mid_off + mid_node] = -1.0
            J[deriv_row, end_off:end_off + end_op.grid.size] = \
                -line.a * (end_op.s_edge**3 / 2.0) * end_op.d1_s[0, :]
            J[deriv_row, mid_off:mid_off + mid_op.grid.size] = \
                -line.a * mid_op.d1_z[mid_node, :]
        else:
            j = which
            left, right = ops.middles[j], ops.middles[j + 1]
            lo, ro = off[1 + j], off[2 + j]
            J[value_row, lo] = 1.0
            J[value_row, ro + right.grid.n] = -1.0
            J[deriv_row, lo:lo + left.grid.size] = line.a * left.d1_z[0, :]
            J[deriv_row, ro:ro + right.grid.size] = -line.a * right.d1_z[right.grid.n, :]
    return J


def assemble(line: LineSpec, layout: DomainLayout,
             state: SolveState) -> tuple[np.ndarray, DenseMatrix]:
    """Residual vector and Jacobian of the full tau-replaced system."""
    ops = build_operators(line, layout)
    return _residual_vector(ops, state), DenseMatrix(_jacobian_matrix(ops, state))


def _sup_norm(F: np.ndarray) -> float:
    return float(np.max(np.abs(F)))


def newton_solve(line: LineSpec, layout: DomainLayout,
                 config: SolverConfig | None = None) -> tuple[SolveState, SolveReport]:
    """Newton iteration on the assembled system with optional step-halving.

    Stops when the sup norm of the residual drops to the tolerance or the
    iteration budget is exhausted (the report then carries converged=False).
    A singular Newton matrix raises SingularJacobian with the iteration index;
    the usual cause is a pole on or near the line, or a line outside the
    pole-free sector.
    """
    config = config or SolverConfig()
    check = validate_line(line)
    if not check.ok and not line.allow_outside_sector:
        raise SectorViolation(check.violations)

    ops = build_operators(line, layout)
    state = initial_iterate(line, layout, config.series_terms)
    u = state.vector()
    F = _residual_vector(ops, state)
    history = [_sup_norm(F)]
    iterations = 0
    halvings_total = 0
    jac: DenseMatrix | None = None

    while history[-1] > config.tolerance and iterations < config.max_iterations:
        jac = DenseMatrix(_jacobian_matrix(ops, state))
        try:
            du = lu_solve(jac, -F.astype(complex)).astype(_STATE_DTYPE)
        except SingularMatrix as exc:
            raise SingularJacobian(iterations, f"{exc} (pole on or near the line?)") from exc
        u_new = u + du
        state_new = state.with_vector(u_new)
        F_new = _residual_vector(ops, state_new)
        res_new = _sup_norm(F_new)
        if config.damping:
            halved = 0
            while res_new > history[-1] and halved < _MAX_HALVINGS:
                du = du / 2.0
                halved += 1
                u_new = u + du
                state_new = state.with_vector(u_new)
                F_new = _residual_vector(ops, state_new)
                res_new = _sup_norm(F_new)
            halvings_total += halved
        u, state, F = u_new, state_new, F_new
        history.append(res_new)
        iterations += 1

    if jac is None:  # converged on the initial iterate; still report conditioning
        jac = DenseMatrix(_jacobian_matrix(ops, state))

    value_mis, deriv_mis = _junction_mismatches(ops, state)
    report = SolveReport(
        converged=history[-1] <= config.tolerance,
        iterations=iterations,
        residual_history=history,
        final_residual=history[-1],
        junction_value_mismatch=value_mis,
        junction_deriv_mismatch=deriv_mis,
        coeff_spectra={label: to_coeffs(blk.astype(complex))
                       for label, blk in zip(state.labels, state.blocks)},
        jacobian_condition=condition_estimate(jac),
        damping_halvings=halvings_total,
        ode_residual_refined=_refined_ode_residual(ops, state),
    )
    return state, report


def _junction_mismatches(ops: DomainOperators, state: SolveState):
    """|value| and |x-derivative| continuity defects at each junction, left to right."""
    line, sigma = ops.line, ops.line.sigma
    n_mid = len(ops.middles)
    v_l = state.blocks[0].astype(complex)
    mids = [b.astype(complex) for b in state.blocks[1:1 + n_mid]]
    v_r = state.blocks[-1].astype(complex)

    values, derivs = [], []
    om = mids[0]
    node = ops.middles[0].grid.n
    values.append(abs(omega_from_v(v_l[0], ops.end_left.s_edge, sigma) - om[node]))
    derivs.append(abs(domega_dx_end(v_l, ops.end_left, sigma, line)
                      - line.a * (ops.middles[0].d1_z[node, :] @ om)))
    for j in range(n_mid - 1):
        left, right = ops.middles[j], ops.middles[j + 1]
        values.append(abs(mids[j][0] - mids[j + 1][right.grid.n]))
        derivs.append(abs(line.a * (left.d1_z[0, :] @ mids[j])
                          - line.a * (right.d1_z[right.grid.n, :] @ mids[j + 1])))
    om = mids[-1]
    values.append(abs(omega_from_v(v_r[0], ops.end_right.s_edge, sigma) - om[0]))
    derivs.append(abs(domega_dx_end(v_r, ops.end_right, sigma, line)
                      - line.a * (ops.middles[-1].d1_z[0, :] @ om)))
    return [float(v) for v in values], [float(d) for d in derivs]


def _refined_ode_residual(ops: DomainOperators, state: SolveState,
                          refine: int = 4) -> float:
    """Pure-ODE residual of the collocation polynomials on a refined grid.

    The tau rows replace two collocation rows per junction; this diagnostic
    re-evaluates the unreplaced differential equations off the nodes by
    interpolating the solution polynomial and its differentiated nodal values.
    """
    sigma = ops.line.sigma
    worst = 0.0
    for op, blk in zip([ops.end_left, *ops.middles, ops.end_right],
                       [state.blocks[0], *state.blocks[1:-1], state.blocks[-1]]):
        vals = blk.astype(complex)
        fine = make_grid(refine * op.grid.n).points
        if isinstance(op, EndDomainOperator):
            d1v = op.d1_s @ vals
            d2v = op.d2_s @ vals
            for l in fine:
                s = op.s_edge * (1.0 + l) / 2.0
                r = ((s**7 / 4.0) * _interpolate(d2v, l)
                     + 0.75 * s**6 * _interpolate(d1v, l)
                     - 2.0 * sigma * SQRT3 * _interpolate(vals, l)
                     - 3.0 * s * _interpolate(vals, l)**2
                     - (sigma / (4.0 * SQRT3)) * s**4)
                worst = max(worst, abs(r))
        else:
            d2v = op.d2_z @ vals
            for l in fine:
                z = ops.line.a * ((op.x_a * (1 - l) + op.x_b * (1 + l)) / 2.0) + ops.line.b
                r = _interpolate(d2v, l) - 3.0 * _interpolate(vals, l)**2 + z
                worst = max(worst, abs(r))
    return worst


def evaluate_solution(state: SolveState, line: LineSpec, layout: DomainLayout,
                      x_star: float) -> tuple[complex, complex]:
    """(Omega, dOmega/dx) at any real x, interpolated from the converged state.

    End-domain points go through s = 1/sqrt(a*x+b) and l = 2s/s_edge - 1;
    for lines with b != 0 the image of real x may leave the straight s-segment,
    in which case the interpolant is continued to complex l near the segment.
    """
    sigma = line.sigma
    if x_star < layout.x_l or x_star > layout.x_r:
        side = "left" if x_star < layout.x_l else "right"
        x_edge = layout.x_l if side == "left" else layout.x_r
        label = "I" if side == "left" else "III"
        v = state.block(label).astype(complex)
        s_edge = 1.0 / sqrt_branch(line, x_edge)
        s_star = 1.0 / sqrt_branch(line, x_star, ref_x=x_edge)
        l_star = 2.0 * s_star / s_edge - 1.0
        if abs(l_star.imag) < 1e-9:
            l_real = min(1.0, max(-1.0, l_star.real))
            if abs(l_star.real) > 1.0 + 1e-9:
                raise ValueError(f"x = {x_star} maps outside the end domain (l = {l_star.real})")
            l_star = l_real
        n = len(v) - 1
        scale = 2.0 / s_edge
        d1v = (make_grid(n).d1 * scale) @ v
        v_star = _interpolate(v, l_star)
        vs_star = _interpolate(d1v, l_star)
        omega = omega_from_v(v_star, s_star, sigma)
        domega = line.a * (-(s_star**3 / 2.0) * vs_star + sigma * s_star / (2.0 * SQRT3))
        return omega, domega

    k = layout.middle_index(x_star)
    x_a, x_b = layout.middle_bounds(k)
    label = "II" if len(layout.n_middle) == 1 else f"II_{k + 1}"
    om = state.block(label).astype(complex)
    l_star = (2.0 * x_star - x_a - x_b) / (x_b - x_a)
    n = len(om) - 1
    scale = 2.0 / (line.a * (x_b - x_a))
    d1om = (make_grid(n).d1 * scale) @ om
    omega = _interpolate(om, l_star)
    domega = line.a * _interpolate(d1om, l_star)
    return omega, domega
