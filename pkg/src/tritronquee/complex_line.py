"""Straight lines z = a*x + b in the complex plane and their domain decomposition.

The solution is computed along a line parametrised by real x.  Both infinite
directions of the line have to stay strictly inside the pole-free sector
|arg z| < 4*pi/5, otherwise the asymptotic expansion used on the unbounded end
domains does not apply.  All square roots are principal-branch (cut on the
negative real axis); a crossing of the cut along a working segment is reported
instead of silently switching sheets.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Literal

from .errors import BranchCutCrossed, ZeroArgument

# Half opening angle of the pole-free sector.
SECTOR_HALF_ANGLE = 4.0 * math.pi / 5.0

Side = Literal["left", "right"]


@dataclass(frozen=True)
class LineSpec:
    """A line z = a*x + b with the asymptotic branch selector sigma.

    sigma multiplies the principal branch of sqrt(z/3) in the asymptotic
    behaviour Omega ~ sigma*sqrt(z/3).  With the principal branch, the
    tritronquee solution of the sector |arg z| < 4*pi/5 corresponds to
    sigma = -1.
    """

    a: complex
    b: complex
    sigma: int
    allow_outside_sector: bool = False

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("line direction a must be nonzero")
        if self.sigma not in (+1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma!r}")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))


@dataclass(frozen=True)
class DomainLayout:
    """Partition of the line into [x < x_l], middle subdomains and [x > x_r].

    ``n_middle`` holds one polynomial degree per middle subdomain;
    ``middle_splits`` are the interior junction abscissas (one fewer than
    the number of middle subdomains).
    """

    x_l: float
    x_r: float
    n_end_left: int
    n_middle: tuple[int, ...]
    n_end_right: int
    middle_splits: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "n_middle", tuple(int(n) for n in self.n_middle))
        object.__setattr__(self, "middle_splits", tuple(float(s) for s in self.middle_splits))
        if not self.x_l < self.x_r:
            raise ValueError(f"need x_l < x_r, got x_l={self.x_l}, x_r={self.x_r}")
        for name, n in (("n_end_left", self.n_end_left), ("n_end_right", self.n_end_right)):
            if n < 4:
                raise ValueError(f"{name} must be >= 4, got {n}")
        if not self.n_middle:
            raise ValueError("n_middle must hold at least one degree")
        for n in self.n_middle:
            if n < 4:
                raise ValueError(f"middle degrees must be >= 4, got {n}")
        if len(self.middle_splits) != len(self.n_middle) - 1:
            raise ValueError(
                f"{len(self.n_middle)} middle subdomains need "
                f"{len(self.n_middle) - 1} splits, got {len(self.middle_splits)}"
            )
        prev = self.x_l
        for s in self.middle_splits:
            if not prev < s < self.x_r:
                raise ValueError(f"middle_splits must increase strictly inside (x_l, x_r): {s}")
            prev = s

    @property
    def middle_boundaries(self) -> tuple[float, ...]:
        """Subdomain boundaries x_l, splits..., x_r."""
        return (self.x_l, *self.middle_splits, self.x_r)

    def middle_bounds(self, k: int) -> tuple[float, float]:
        """Endpoints [x_a, x_b] of middle subdomain k."""
        bounds = self.middle_boundaries
        if not 0 <= k < len(self.n_middle):
            raise IndexError(f"middle subdomain index {k} out of range")
        return bounds[k], bounds[k + 1]

    def middle_index(self, x: float) -> int:
        """Index of the middle subdomain containing x (ties go left)."""
        if not self.x_l <= x <= self.x_r:
            raise ValueError(f"x={x} is outside the middle range [{self.x_l}, {self.x_r}]")
        return min(bisect_right(self.middle_splits, x), len(self.n_middle) - 1)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_line(line: LineSpec) -> ValidationResult:
    """Check that both infinite directions of the line stay inside the sector.

    Both arg(a) and arg(-a) (reduced to (-pi, pi]) must lie strictly inside
    (-4*pi/5, 4*pi/5): each end domain relies on the asymptotic series, which
    is only valid inside the pole-free sector.
    """
    violations = []
    for label, direction in (("arg(a)", line.a), ("arg(-a)", -line.a)):
        phi = math.atan2(direction.imag, direction.real)
        if phi == -math.pi:  # reduce to (-pi, pi]
            phi = math.pi
        if not abs(phi) < SECTOR_HALF_ANGLE:
            violations.append(
                f"direction {label} = {phi:.6g} is outside the sector "
                f"(-{SECTOR_HALF_ANGLE:.6g}, {SECTOR_HALF_ANGLE:.6g})"
            )
    return ValidationResult(ok=not violations, violations=tuple(violations))


def z_of_x(line: LineSpec, x: float) -> complex:
    """Point on the line at parameter x."""
    return line.a * x + line.b


def _cut_crossing(line: LineSpec, x0: float, x1: float) -> bool:
    """True if z(t) = a*t + b meets the negative real axis for t strictly between x0 and x1.

    The path is linear in t, so Im z(t) is linear and vanishes at most once;
    the crossing point is found exactly instead of by sampling.
    """
    lo, hi = min(x0, x1), max(x0, x1)
    ia, ib = line.a.imag, line.b.imag
    if ia == 0.0:
        if ib != 0.0:
            return False
        # whole segment on the real axis: on the cut iff any point has Re z <= 0
        return min(line.a.real * lo + line.b.real, line.a.real * hi + line.b.real) <= 0.0
    t_star = -ib / ia
    if not lo < t_star < hi:
        return False
    return line.a.real * t_star + line.b.real <= 0.0


def sqrt_branch(line: LineSpec, x: float, ref_x: float | None = None) -> complex:
    """Principal square root of z(x) = a*x + b, guarded against cut crossings.

    The principal branch has its cut on the negative real axis and returns
    values with nonnegative real part.  When ``ref_x`` (usually the nearest
    junction abscissa) is given, the segment between x and ref_x is checked:
    if z(t) crosses the cut there, the root would jump sheets relative to the
    working segment and BranchCutCrossed is raised.
    """
    z = z_of_x(line, x)
    if z == 0:
        raise ZeroArgument(f"a*x + b = 0 at x = {x}")
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchCutCrossed(f"z({x}) = {z} lies on the branch cut")
    if ref_x is not None and _cut_crossing(line, x, ref_x):
        raise BranchCutCrossed(
            f"segment z(t), t in [{min(x, ref_x)}, {max(x, ref_x)}], crosses the branch cut"
        )
    return complex(z) ** 0.5


def s_edge_of(line: LineSpec, layout: DomainLayout, side: Side) -> complex:
    """Junction value s_edge = 1/sqrt(a*x_edge + b) for the given end domain."""
    x_edge = layout.x_l if side == "left" else layout.x_r
    return 1.0 / sqrt_branch(line, x_edge)


def s_of_l_end(line: LineSpec, layout: DomainLayout, side: Side, l: float) -> complex:
    """Map l in [-1, 1] to the compactified coordinate of an end domain.

    s = s_edge * (1 + l)/2, so l = -1 is the point at infinity (s = 0 exactly)
    and l = +1 is the junction with the middle region.
    """
    return s_edge_of(line, layout, side) * (1.0 + l) / 2.0


def x_of_l_middle(layout: DomainLayout, k: int, l: float) -> float:
    """Map l in [-1, 1] to x on middle subdomain k (affine, increasing)."""
    x_a, x_b = layout.middle_bounds(k)
    return x_a * (1.0 - l) / 2.0 + x_b * (1.0 + l) / 2.0
