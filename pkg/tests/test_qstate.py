"""Tests for the reduced state, its derivative and its eigen-system."""

import math

import numpy as np
import pytest

from models.schemas import QubitState
from services.amplitude import amplitude_derivative, amplitude_series
from services.qstate import (
    apply_channel,
    evolve_state,
    initial_state,
    spectral_decompose,
    state_derivative,
)


def random_state(rng) -> QubitState:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = z @ z.conj().T
    return QubitState(matrix=rho / np.trace(rho).real)


class TestEvolveState:
    """Single-excitation channel applied to the beta family."""

    def test_excited_pure_state(self):
        state = evolve_state(1.0, 1.0)
        np.testing.assert_allclose(state.matrix, [[1, 0], [0, 0]], atol=0)

    def test_beta_one_is_diagonal(self):
        c = 0.6 * np.exp(0.3j)
        state = evolve_state(1.0, c)
        np.testing.assert_allclose(state.matrix, np.diag([0.36, 0.64]), atol=1e-15)

    def test_half_weight(self):
        state = evolve_state(1 / math.sqrt(2), 1 / math.sqrt(2))
        np.testing.assert_allclose(state.matrix, [[0.25, 0.35355339], [0.35355339, 0.75]], atol=1e-8)
        assert np.linalg.eigvalsh(state.matrix).min() >= 0

    def test_valid_along_trace(self, make_trace):
        trace = make_trace(omega=0.4, delta=0.1, phi=1.0, t_delay=0.5, grid_n=200)
        for k in range(0, len(trace.grid), 37):
            state = evolve_state(0.8, trace.c[k], trace.grid[k])
            assert state.is_valid(tol=1e-12)

    def test_real_coherence_drops_phase(self):
        c = 0.5 * np.exp(1.1j)
        state = evolve_state(0.6, c, real_coherence=True)
        assert state.matrix[0, 1].imag == 0.0
        assert state.matrix[0, 1].real == pytest.approx(0.6 * 0.8 * 0.5)

    def test_apply_channel_general_input(self, rng):
        rho0 = random_state(rng).matrix
        c = 0.7 * np.exp(-0.4j)
        state = apply_channel(rho0, c)
        assert state.trace == pytest.approx(1.0, abs=1e-14)
        assert state.matrix[0, 0].real == pytest.approx(rho0[0, 0].real * 0.49)
        assert state.matrix[0, 1] == pytest.approx(rho0[0, 1] * c)

    def test_apply_channel_identity(self, rng):
        rho0 = random_state(rng).matrix
        np.testing.assert_allclose(apply_channel(rho0, 1.0).matrix, rho0, atol=1e-15)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            initial_state(1.2)
        with pytest.raises(ValueError):
            apply_channel(np.eye(3), 0.5)
        with pytest.raises(ValueError):
            apply_channel(np.eye(2) / 2, 1.5)


class TestSpectralDecompose:
    """Closed-form 2x2 eigen-system."""

    def test_diagonal_state(self):
        decomp = spectral_decompose(QubitState(np.diag([0.3, 0.7]).astype(complex)))
        assert decomp.p_plus == pytest.approx(0.7)
        assert decomp.p_minus == pytest.approx(0.3)
        np.testing.assert_allclose(np.abs(decomp.v_plus), [0, 1], atol=1e-15)
        np.testing.assert_allclose(np.abs(decomp.v_minus), [1, 0], atol=1e-15)

    def test_coherent_state_uses_direct_eigenvalues(self):
        state = evolve_state(1 / math.sqrt(2), 1 / math.sqrt(2))
        decomp = spectral_decompose(state)
        assert decomp.p_plus == pytest.approx((1 + math.sqrt(3) / 2) / 2, rel=1e-12)
        assert decomp.p_plus == pytest.approx(0.93301, abs=1e-5)
        np.testing.assert_allclose(decomp.eigenvalues, np.linalg.eigvalsh(state.matrix)[::-1], atol=1e-14)

    def test_maximally_mixed(self):
        decomp = spectral_decompose(QubitState(np.eye(2, dtype=complex) / 2))
        assert decomp.p_plus == decomp.p_minus == 0.5
        np.testing.assert_array_equal(decomp.v_plus, [1, 0])
        np.testing.assert_array_equal(decomp.v_minus, [0, 1])

    def test_reconstructs_random_states(self, rng):
        for _ in range(200):
            state = random_state(rng)
            decomp = spectral_decompose(state)
            np.testing.assert_allclose(decomp.reconstruct(), state.matrix, atol=1e-12)
            assert decomp.p_plus >= decomp.p_minus
            assert decomp.p_plus + decomp.p_minus == pytest.approx(1.0, abs=1e-14)

    def test_orthonormal_and_gauge_fixed(self, rng):
        for _ in range(200):
            decomp = spectral_decompose(random_state(rng))
            basis = np.column_stack(decomp.eigenvectors)
            np.testing.assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)
            for v in decomp.eigenvectors:
                first = v[np.flatnonzero(np.abs(v) > 1e-14)[0]]
                assert first.imag == pytest.approx(0.0, abs=1e-15)
                assert first.real > 0

    def test_beta_one_eigenvalues_are_populations(self, bound_state_trace):
        for k in (10, 2500, 4000):
            p = bound_state_trace.population[k]
            decomp = spectral_decompose(evolve_state(1.0, bound_state_trace.c[k]))
            assert sorted(decomp.eigenvalues) == pytest.approx(sorted([p, 1 - p]), abs=1e-15)


class TestStateDerivative:
    """Time derivative of the channel-evolved state."""

    def test_initial_rate(self):
        np.testing.assert_allclose(state_derivative(1.0, 1.0, -0.5), np.diag([-1.0, 1.0]), atol=0)

    def test_ground_state_is_stationary(self):
        np.testing.assert_array_equal(state_derivative(0.0, 0.3 + 0.1j, -0.2 + 0.05j), np.zeros((2, 2)))

    def test_traceless_and_hermitian(self):
        rhodot = state_derivative(0.7, 0.4 - 0.2j, -0.1 + 0.3j)
        assert np.trace(rhodot) == 0
        np.testing.assert_allclose(rhodot, rhodot.conj().T, atol=0)

    @pytest.mark.parametrize("beta,real_coherence", [(1.0, False), (0.6, False), (0.6, True)])
    def test_matches_finite_difference(self, make_frame, beta, real_coherence):
        frame = make_frame(omega=0.5, delta=0.2, phi=0.9, t_delay=1.0)
        h = 1e-4
        for t in (0.37, 1.55, 3.2):
            c = amplitude_series(frame, t)
            cdot = amplitude_derivative(frame, c, amplitude_series(frame, t - 1.0) if t >= 1.0 else None, t)
            forward = evolve_state(beta, amplitude_series(frame, t + h), real_coherence=real_coherence).matrix
            backward = evolve_state(beta, amplitude_series(frame, t - h), real_coherence=real_coherence).matrix
            numeric = (forward - backward) / (2 * h)
            exact = state_derivative(beta, c, cdot, real_coherence)
            assert np.max(np.abs(numeric - exact)) < 1e-6


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
