"""Tests for MC functions, the metric speed and the average speed."""

import math

import numpy as np
import pytest

from models.schemas import MCFunction, MetricName, QubitState, SpectralDecomp
from services.geometry import (
    F_MAX,
    F_MIN,
    METRICS,
    WIGNER_YANASE,
    average_speed,
    endpoint_limit,
    get_metric,
    instantaneous_speed,
    make_metric,
    mc_c,
    metric_speed,
    spectral_speed,
    speed_series,
)
from services.infoflow import flow_report
from services.qstate import spectral_decompose


def random_pair(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = z @ z.conj().T
    rho /= np.trace(rho).real
    w = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rhodot = w + w.conj().T
    rhodot -= np.trace(rhodot) / 2 * np.eye(2)
    return QubitState(rho), rhodot


def monotone_arc_length(populations):
    """Fisher-Rao length of a diagonal path through the given turning points."""
    angles = np.arcsin(np.sqrt(populations))
    return float(np.sum(np.abs(np.diff(angles))))


class TestMCFunctions:
    """Built-in and custom MC functions."""

    def test_wigner_yanase_value(self):
        assert mc_c(WIGNER_YANASE, 0.25, 0.75) == pytest.approx(2.14359, abs=1e-5)

    def test_extreme_metrics(self):
        assert mc_c(F_MIN, 0.25, 0.75) == pytest.approx(1 / (2 * 0.25 * 0.75))
        assert mc_c(F_MAX, 0.25, 0.75) == pytest.approx(2.0)

    @pytest.mark.parametrize("metric", list(METRICS.values()))
    def test_closed_form_matches_generic(self, metric):
        generic = MCFunction(name=MetricName.CUSTOM, f=metric.f)
        for x, y in [(0.1, 0.9), (0.5, 0.5), (0.93, 0.07), (1e-6, 1.0)]:
            assert mc_c(metric, x, y) == pytest.approx(mc_c(generic, x, y), rel=1e-12)

    @pytest.mark.parametrize("metric", list(METRICS.values()))
    def test_diagonal_is_inverse(self, metric):
        assert mc_c(metric, 0.4, 0.4) == pytest.approx(2.5, rel=1e-14)

    def test_ordering_between_extremes(self):
        for x, y in [(0.1, 0.9), (0.3, 0.6), (0.02, 0.5)]:
            assert mc_c(F_MIN, x, y) >= mc_c(WIGNER_YANASE, x, y) >= mc_c(F_MAX, x, y)

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            mc_c(WIGNER_YANASE, 0.0, 0.5)

    @pytest.mark.parametrize("metric", list(METRICS.values()))
    def test_builtins_pass_admissibility(self, metric):
        custom = make_metric(metric.f, label=metric.label)
        assert custom.name == MetricName.CUSTOM

    def test_make_metric_rejects_non_symmetric(self):
        with pytest.raises(ValueError):
            make_metric(lambda t: t)

    def test_make_metric_rejects_out_of_bounds(self):
        # symmetric and normalized, but above f_max away from t = 1
        with pytest.raises(ValueError):
            make_metric(lambda t: (1 + t * t) / (1 + t))

    def test_custom_name_needs_a_function(self):
        with pytest.raises(ValueError):
            get_metric("custom")
        assert get_metric("min") is F_MIN


class TestMetricSpeed:
    """Metric norm of a tangent vector."""

    def test_maximally_mixed_population_rate(self):
        decomp = spectral_decompose(QubitState(np.eye(2, dtype=complex) / 2))
        rhodot = np.diag([-0.1, 0.1]).astype(complex)
        for metric in METRICS.values():
            assert metric_speed(decomp, rhodot, metric) == pytest.approx(0.1, rel=1e-14)

    def test_zero_tangent(self):
        decomp = spectral_decompose(QubitState(np.diag([0.3, 0.7]).astype(complex)))
        assert metric_speed(decomp, np.zeros((2, 2)), WIGNER_YANASE) == 0.0

    def test_pure_rotation(self):
        decomp = spectral_decompose(QubitState(np.diag([0.3, 0.7]).astype(complex)))
        z = 0.2 - 0.15j
        rhodot = np.array([[0, z], [np.conj(z), 0]])
        for metric in METRICS.values():
            expected = abs(z) * math.sqrt(metric.c(0.7, 0.3) / 2)
            assert metric_speed(decomp, rhodot, metric) == pytest.approx(expected, rel=1e-13)

    def test_matches_spectral_form(self, rng):
        checked = 0
        while checked < 1000:
            state, rhodot = random_pair(rng)
            decomp = spectral_decompose(state)
            if decomp.p_plus - decomp.p_minus < 1e-3:
                continue
            metric = list(METRICS.values())[checked % 3]
            assert metric_speed(decomp, rhodot, metric) == pytest.approx(
                spectral_speed(decomp, rhodot, metric), rel=1e-10
            )
            checked += 1

    def test_spectral_form_rejects_degenerate(self):
        decomp = spectral_decompose(QubitState(np.eye(2, dtype=complex) / 2))
        with pytest.raises(ValueError):
            spectral_speed(decomp, np.diag([0.1, -0.1]), WIGNER_YANASE)

    def test_gauge_invariant(self, rng):
        state, rhodot = random_pair(rng)
        decomp = spectral_decompose(state)
        rotated = SpectralDecomp(
            p_plus=decomp.p_plus,
            p_minus=decomp.p_minus,
            v_plus=decomp.v_plus * np.exp(0.7j),
            v_minus=decomp.v_minus * np.exp(-2.1j),
        )
        assert metric_speed(rotated, rhodot, WIGNER_YANASE) == pytest.approx(
            metric_speed(decomp, rhodot, WIGNER_YANASE), rel=1e-13
        )

    def test_classical_reduction(self, bound_state_trace):
        for t in (0.5, 2.7, 6.3):
            speeds = [instantaneous_speed(bound_state_trace, 1.0, m, t) for m in METRICS.values()]
            assert speeds[1] == pytest.approx(speeds[0], rel=1e-12)
            assert speeds[2] == pytest.approx(speeds[0], rel=1e-12)
            p = abs(bound_state_trace.value_at(t)) ** 2
            pdot = 2 * (np.conj(bound_state_trace.value_at(t)) * bound_state_trace.derivative_at(t)).real
            assert speeds[0] == pytest.approx(abs(pdot) / (2 * math.sqrt(p * (1 - p))), rel=1e-10)


class TestSpeedSeries:
    """Speed sampled on the trace grid."""

    def test_initial_speed_is_infinite(self, markovian_trace):
        speeds = speed_series(markovian_trace, 1.0, WIGNER_YANASE)
        assert math.isinf(speeds[0])
        assert np.all(np.isfinite(speeds[1:]))

    def test_ground_state_never_moves(self, markovian_trace):
        assert not np.any(speed_series(markovian_trace, 0.0, WIGNER_YANASE))

    def test_beta_one_fast_path_matches_general(self, bound_state_trace):
        fast = speed_series(bound_state_trace, 1.0, WIGNER_YANASE)
        for k in (1, 700, 1000, 1001, 3333):
            general = instantaneous_speed(bound_state_trace, 1.0, WIGNER_YANASE, bound_state_trace.grid[k])
            assert fast[k] == pytest.approx(general, rel=1e-9)

    def test_small_time_singularity(self, markovian_trace):
        a = markovian_trace.frame.decay
        for t in (1e-6, 1e-4):
            v = instantaneous_speed(markovian_trace, 1.0, WIGNER_YANASE, t)
            assert v == pytest.approx(math.sqrt(a / (2 * t)), rel=1e-2)

    def test_endpoint_limit_excited_state(self):
        for metric in METRICS.values():
            assert endpoint_limit(1.0, 0.5, metric) == pytest.approx(0.25, rel=1e-12)

    def test_endpoint_limit_is_finite_for_mixed_weight(self):
        values = [endpoint_limit(0.6, 0.5, metric) for metric in METRICS.values()]
        assert all(math.isfinite(v) and v > 0 for v in values)


class TestAverageSpeed:
    """Kink- and singularity-aware time average of V."""

    def test_pure_exponential(self, markovian_trace):
        expected = (math.pi / 2 - math.asin(math.exp(-5.0))) / 10.0
        value = average_speed(markovian_trace, 1.0, WIGNER_YANASE, 10.0)
        assert value == pytest.approx(expected, abs=1e-6)
        assert value == pytest.approx(0.15641, abs=1e-5)

    def test_ground_state(self, markovian_trace):
        assert average_speed(markovian_trace, 0.0, WIGNER_YANASE, 10.0) == 0.0

    def test_phase_irrelevant_without_feedback(self, make_trace):
        values = [
            average_speed(make_trace(omega=0.0, phi=phi, t_delay=20.0, grid_n=200), 0.8, WIGNER_YANASE, 10.0)
            for phi in np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
        ]
        assert max(values) - min(values) < 1e-12

    def test_arc_length_over_monotone_segments(self, bound_state_trace):
        report = flow_report(bound_state_trace)
        assert report.extrema
        expected = monotone_arc_length([report.d0] + [d for _, d in report.extrema] + [report.dtau])
        value = average_speed(bound_state_trace, 1.0, WIGNER_YANASE, 10.0) * 10.0
        assert value == pytest.approx(expected, abs=1e-5)

    def test_metric_ordering(self, make_trace):
        trace = make_trace(omega=0.0, phi=1.0, t_delay=2.0, grid_n=200)
        v_min, v_wy, v_max = (average_speed(trace, 0.6, m, 10.0) for m in (F_MIN, WIGNER_YANASE, F_MAX))
        assert v_min >= v_wy >= v_max

    def test_shorter_horizon(self, markovian_trace):
        expected = (math.pi / 2 - math.asin(math.exp(-2.5))) / 5.0
        assert average_speed(markovian_trace, 1.0, WIGNER_YANASE, 5.0) == pytest.approx(expected, abs=1e-6)

    def test_rejects_bad_horizon(self, markovian_trace):
        with pytest.raises(ValueError):
            average_speed(markovian_trace, 1.0, WIGNER_YANASE, 12.0)
        with pytest.raises(ValueError):
            average_speed(markovian_trace, 1.0, WIGNER_YANASE, 0.0)

    @pytest.mark.parametrize("phi", [0.0, math.pi / 2])
    def test_drive_strength_speeds_up(self, make_trace, phi):
        omegas = np.arange(0.1, 2.0, 0.2)
        values = [
            average_speed(make_trace(omega=w, delta=0.0, phi=phi, t_delay=0.2, grid_n=200), 1.0, WIGNER_YANASE, 10.0)
            for w in omegas
        ]
        assert np.all(np.diff(values) > 0)


@pytest.fixture
def rng():
    return np.random.default_rng(7)
