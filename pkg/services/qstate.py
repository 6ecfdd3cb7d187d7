"""Reduced qubit state in the dressed basis, its rate of change and eigen-system."""

import math

import numpy as np

from models.schemas import QubitState, SpectralDecomp

DEGENERACY_TOL = 1e-14


def _check_beta(beta: float) -> None:
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta={beta!r} must lie in [0, 1]")


def initial_state(beta: float) -> np.ndarray:
    """Pure state beta|+> + sqrt(1 - beta^2)|-> as a density matrix."""
    _check_beta(beta)
    off = beta * math.sqrt(1.0 - beta * beta)
    return np.array([[beta * beta, off], [off, 1.0 - beta * beta]], dtype=complex)


def apply_channel(rho0: np.ndarray, c: complex, t: float = 0.0) -> QubitState:
    """
    Evolve an arbitrary initial state through the single-excitation channel.

    The excited population scales with |c|^2 and the coherence with c; the
    ground population absorbs the rest so the trace stays one.

    Args:
        rho0: Initial 2x2 density matrix
        c: Amplitude at time t, |c| <= 1
        t: Timestamp carried on the result

    Returns:
        QubitState at time t
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (2, 2):
        raise ValueError(f"initial state has shape {rho0.shape}, expected (2, 2)")
    if abs(c) > 1.0 + 1e-12:
        raise ValueError(f"|c|={abs(c)!r} exceeds 1")

    excited = rho0[0, 0].real * abs(c) ** 2
    coherence = rho0[0, 1] * c
    matrix = np.array(
        [[excited, coherence], [np.conj(coherence), 1.0 - excited]],
        dtype=complex,
    )
    return QubitState(matrix=matrix, t=t)


def evolve_state(beta: float, c: complex, t: float = 0.0, real_coherence: bool = False) -> QubitState:
    """
    State at amplitude c for the beta-family initial state.

    With real_coherence the off-diagonal uses |c| in place of c, which drops
    the feedback phase from the coherence.
    """
    amplitude = abs(c) if real_coherence else c
    return apply_channel(initial_state(beta), amplitude, t)


def state_derivative(beta: float, c: complex, cdot: complex, real_coherence: bool = False) -> np.ndarray:
    """
    Time derivative of evolve_state at one trace point.

    Args:
        beta: Initial-state weight
        c: Amplitude
        cdot: Amplitude derivative at the same time
        real_coherence: Differentiate |c| instead of c in the coherence

    Returns:
        Traceless Hermitian 2x2 matrix
    """
    _check_beta(beta)
    pdot = 2.0 * (np.conj(c) * cdot).real
    weight = beta * math.sqrt(1.0 - beta * beta)

    if real_coherence:
        modulus = abs(c)
        coherence_rate = pdot / (2.0 * modulus) if modulus > 0 else 0.0
    else:
        coherence_rate = cdot

    diag = beta * beta * pdot
    off = weight * coherence_rate
    return np.array([[diag, off], [np.conj(off), -diag]], dtype=complex)


def _gauge(v: np.ndarray) -> np.ndarray:
    """Normalize and rotate so the first nonzero component is real positive."""
    v = v / np.linalg.norm(v)
    for component in v:
        if abs(component) > DEGENERACY_TOL:
            return v * (np.conj(component) / abs(component))
    return v


def spectral_decompose(state: QubitState) -> SpectralDecomp:
    """
    Closed-form eigen-system of a 2x2 Hermitian state.

    The larger eigenvector is built from whichever column of (rho - p_- I)
    has the larger pivot, so no division by a small off-diagonal occurs.
    The second eigenvector is its orthogonal complement.

    Args:
        state: Valid qubit state

    Returns:
        SpectralDecomp with p_plus >= p_minus
    """
    m = state.matrix
    a, d = m[0, 0].real, m[1, 1].real
    b = m[0, 1]
    trace = a + d
    lam = math.sqrt((a - d) ** 2 + 4.0 * abs(b) ** 2)
    p_plus, p_minus = (trace + lam) / 2.0, (trace - lam) / 2.0

    if lam < DEGENERACY_TOL:
        return SpectralDecomp(
            p_plus=p_plus,
            p_minus=p_minus,
            v_plus=np.array([1.0, 0.0], dtype=complex),
            v_minus=np.array([0.0, 1.0], dtype=complex),
        )

    if a >= d:
        v_plus = np.array([p_plus - d, np.conj(b)], dtype=complex)
    else:
        v_plus = np.array([b, p_plus - a], dtype=complex)
    v_plus = _gauge(v_plus)
    v_minus = _gauge(np.array([-np.conj(v_plus[1]), np.conj(v_plus[0])], dtype=complex))

    return SpectralDecomp(p_plus=p_plus, p_minus=p_minus, v_plus=v_plus, v_minus=v_minus)
