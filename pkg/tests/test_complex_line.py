"""Tests for line validation, branch-aware roots and the domain maps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tritronquee import (
    BranchCutCrossed,
    DomainLayout,
    LineSpec,
    ZeroArgument,
    s_of_l_end,
    sqrt_branch,
    validate_line,
    x_of_l_middle,
    z_of_x,
)

LAYOUT = DomainLayout(x_l=-10.0, x_r=10.0, n_end_left=20, n_middle=(64,), n_end_right=20)


class TestLineSpec:
    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            LineSpec(a=0.0, b=1.0, sigma=1)

    def test_bad_sigma_rejected(self):
        with pytest.raises(ValueError, match="sigma"):
            LineSpec(a=1j, b=0.0, sigma=2)


class TestValidateLine:
    def test_imaginary_axis_ok(self):
        assert validate_line(LineSpec(a=1j, b=0.0, sigma=1)).ok

    def test_near_stokes_ok(self):
        line = LineSpec(a=np.exp(1j * (4 * np.pi / 5 - 0.05)), b=0.0, sigma=1)
        assert validate_line(line).ok

    def test_real_axis_violates(self):
        result = validate_line(LineSpec(a=1.0, b=0.0, sigma=1))
        assert not result.ok
        assert len(result.violations) == 1
        assert "arg(-a)" in result.violations[0]
        assert "3.14159" in result.violations[0]

    def test_on_stokes_ray_violates(self):
        # the sector is open: arg(a) = 4*pi/5 exactly is outside
        line = LineSpec(a=np.exp(1j * 4 * np.pi / 5), b=0.0, sigma=1)
        assert not validate_line(line).ok

    @given(phi=st.floats(-math.pi, math.pi), r=st.floats(1e-6, 1e6))
    @settings(max_examples=60, deadline=None)
    def test_scale_invariance(self, phi, r):
        a = complex(math.cos(phi), math.sin(phi))
        base = validate_line(LineSpec(a=a, b=0.0, sigma=1))
        scaled = validate_line(LineSpec(a=a * r, b=0.0, sigma=1))
        assert base.ok == scaled.ok


class TestZOfX:
    @pytest.mark.parametrize("a, b, x, expected", [
        (1j, 0.0, 2.0, 2j),
        (1j, 0.0, 0.0, 0j),
        (1 + 1j, 3.0, 1.0, 4 + 1j),
    ])
    def test_values(self, a, b, x, expected):
        assert z_of_x(LineSpec(a=a, b=b, sigma=1), x) == expected


class TestSqrtBranch:
    def test_principal_root_upper(self):
        line = LineSpec(a=1j, b=0.0, sigma=1)
        assert sqrt_branch(line, 4.0) == pytest.approx(np.sqrt(2) * (1 + 1j), abs=1e-14)

    def test_principal_root_lower(self):
        line = LineSpec(a=1j, b=0.0, sigma=1)
        assert sqrt_branch(line, -4.0) == pytest.approx(np.sqrt(2) * (1 - 1j), abs=1e-14)

    def test_on_cut_rejected(self):
        line = LineSpec(a=1.0, b=0.0, sigma=1, allow_outside_sector=True)
        with pytest.raises(BranchCutCrossed):
            sqrt_branch(line, -1.0)

    def test_branch_point_rejected(self):
        with pytest.raises(ZeroArgument):
            sqrt_branch(LineSpec(a=1j, b=0.0, sigma=1), 0.0)

    def test_segment_crossing_detected(self):
        # z(t) = -5 + i t crosses the negative real axis at t = 0
        line = LineSpec(a=1j, b=-5.0, sigma=1)
        sqrt_branch(line, -3.0)  # endpoint alone is fine
        with pytest.raises(BranchCutCrossed):
            sqrt_branch(line, -3.0, ref_x=3.0)

    def test_segment_without_crossing_passes(self):
        line = LineSpec(a=1j, b=5.0, sigma=1)  # Re z = 5 > 0 everywhere
        sqrt_branch(line, -3.0, ref_x=3.0)

    @given(x=st.floats(-50.0, 50.0), phi=st.floats(-2.0, 2.0))
    @settings(max_examples=80, deadline=None)
    def test_square_recovers_argument(self, x, phi):
        line = LineSpec(a=complex(math.cos(phi), math.sin(phi)), b=0.5j, sigma=1,
                        allow_outside_sector=True)
        z = z_of_x(line, x)
        if z == 0 or (z.imag == 0 and z.real < 0):
            return
        root = sqrt_branch(line, x)
        assert abs(root**2 - z) <= 1e-14 * abs(z)
        assert root.real >= 0.0


class TestEndMap:
    LINE = LineSpec(a=1j, b=0.0, sigma=1)

    def test_infinity_endpoint_exact_zero(self):
        assert s_of_l_end(self.LINE, LAYOUT, "right", -1.0) == 0.0
        assert s_of_l_end(self.LINE, LAYOUT, "left", -1.0) == 0.0

    def test_junction_endpoint(self):
        expected = 1.0 / np.sqrt(10j)
        assert s_of_l_end(self.LINE, LAYOUT, "right", 1.0) == pytest.approx(expected, abs=1e-15)

    def test_midpoint_is_half(self):
        expected = 1.0 / (2.0 * np.sqrt(10j))
        assert s_of_l_end(self.LINE, LAYOUT, "right", 0.0) == pytest.approx(expected, abs=1e-15)

    def test_linear_in_l(self):
        ls = np.linspace(-1, 1, 7)
        vals = np.array([s_of_l_end(self.LINE, LAYOUT, "right", l) for l in ls])
        second_diff = np.diff(vals, n=2)
        assert np.abs(second_diff).max() < 1e-16


class TestMiddleMap:
    def test_midpoint(self):
        assert x_of_l_middle(LAYOUT, 0, 0.0) == 0.0

    def test_left_endpoint(self):
        assert x_of_l_middle(LAYOUT, 0, -1.0) == -10.0

    def test_split_subdomain_endpoint(self):
        layout = DomainLayout(x_l=-10.0, x_r=10.0, n_end_left=20,
                              n_middle=(32, 32), n_end_right=20, middle_splits=(0.0,))
        assert x_of_l_middle(layout, 1, 1.0) == 10.0
        assert x_of_l_middle(layout, 1, -1.0) == 0.0

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            x_of_l_middle(LAYOUT, 1, 0.0)

    @given(l1=st.floats(-1.0, 1.0), l2=st.floats(-1.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_monotone(self, l1, l2):
        if l1 < l2:
            xa, xb = x_of_l_middle(LAYOUT, 0, l1), x_of_l_middle(LAYOUT, 0, l2)
            assert xa <= xb
            if l2 - l1 > 1e-12:
                assert xa < xb


class TestDomainLayout:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(ValueError, match="x_l < x_r"):
            DomainLayout(x_l=10.0, x_r=-10.0, n_end_left=20, n_middle=(64,), n_end_right=20)

    def test_small_degree_rejected(self):
        with pytest.raises(ValueError, match=">= 4"):
            DomainLayout(x_l=-1.0, x_r=1.0, n_end_left=2, n_middle=(64,), n_end_right=20)

    def test_split_count_mismatch_rejected(self):
        with pytest.raises(ValueError, match="splits"):
            DomainLayout(x_l=-1.0, x_r=1.0, n_end_left=8, n_middle=(8, 8), n_end_right=8)

    def test_split_outside_range_rejected(self):
        with pytest.raises(ValueError, match="strictly inside"):
            DomainLayout(x_l=-1.0, x_r=1.0, n_end_left=8, n_middle=(8, 8),
                         n_end_right=8, middle_splits=(2.0,))

    def test_splits_must_increase(self):
        with pytest.raises(ValueError, match="strictly inside"):
            DomainLayout(x_l=-1.0, x_r=1.0, n_end_left=8, n_middle=(8, 8, 8),
                         n_end_right=8, middle_splits=(0.5, 0.25))
