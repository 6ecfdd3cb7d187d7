"""Shared fixtures for the simulator tests."""

import math
import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models.schemas import PhysicalParams  # noqa: E402
from services.amplitude import series_trace  # noqa: E402
from services.frame import derive_frame  # noqa: E402


@pytest.fixture
def make_frame():
    """Frame factory taking PhysicalParams keyword overrides."""
    def _make(**overrides):
        return derive_frame(PhysicalParams(**overrides))
    return _make


@pytest.fixture
def make_trace(make_frame):
    """Series trace factory: tau and grid_n plus PhysicalParams overrides."""
    def _make(tau=10.0, grid_n=1000, **overrides):
        return series_trace(make_frame(tau=tau, **overrides), tau, grid_n)
    return _make


@pytest.fixture
def bound_state_trace(make_trace):
    """Undriven qubit, t_d = 2, phi = 0: constructive feedback with trapping."""
    return make_trace(omega=0.0, delta=0.0, phi=0.0, t_delay=2.0)


@pytest.fixture
def quadrature_phase_trace(make_trace):
    """Undriven qubit, t_d = 2, phi = pi/2."""
    return make_trace(omega=0.0, delta=0.0, phi=math.pi / 2, t_delay=2.0)


@pytest.fixture
def markovian_trace(make_trace):
    """Memory time beyond the horizon, so the feedback never acts."""
    return make_trace(omega=0.0, delta=0.0, phi=0.0, t_delay=20.0, grid_n=200)
