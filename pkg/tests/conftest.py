"""Shared fixtures: the two reference configurations, solved once per session."""

import numpy as np
import pytest

from tritronquee import DomainLayout, LineSpec, SolverConfig, newton_solve

IMAG_LINE = LineSpec(a=1j, b=0.0, sigma=-1)
STOKES_LINE = LineSpec(a=np.exp(1j * (4 * np.pi / 5 - 0.05)), b=0.0, sigma=-1)

IMAG_LAYOUT = DomainLayout(x_l=-10.0, x_r=10.0, n_end_left=20,
                           n_middle=(256,), n_end_right=20)
STOKES_LAYOUT = DomainLayout(x_l=-10.0, x_r=10.0, n_end_left=20,
                             n_middle=(256,), n_end_right=256)


@pytest.fixture(scope="session")
def imag_run():
    """Imaginary-axis reference solve: (line, layout, state, report)."""
    state, report = newton_solve(IMAG_LINE, IMAG_LAYOUT, SolverConfig())
    return IMAG_LINE, IMAG_LAYOUT, state, report


@pytest.fixture(scope="session")
def imag_run_128():
    """Imaginary-axis solve with the middle resolution halved."""
    layout = DomainLayout(x_l=-10.0, x_r=10.0, n_end_left=20,
                          n_middle=(128,), n_end_right=20)
    state, report = newton_solve(IMAG_LINE, layout, SolverConfig())
    return IMAG_LINE, layout, state, report


@pytest.fixture(scope="session")
def stokes_run():
    """Near-Stokes reference solve: (line, layout, state, report)."""
    state, report = newton_solve(STOKES_LINE, STOKES_LAYOUT, SolverConfig())
    return STOKES_LINE, STOKES_LAYOUT, state, report
