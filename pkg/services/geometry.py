"""Monotone-metric speed of the qubit state along an amplitude trace."""

import logging
import math
from typing import Callable

import numpy as np

import config
from models.schemas import AmplitudeTrace, MCFunction, MetricName, SpectralDecomp
from services.qstate import evolve_state, spectral_decompose, state_derivative
from utils.numerics import integrate_pieces

logger = logging.getLogger(__name__)

# sample points for MC-function admissibility checks
_CHECK_GRID = np.round(np.arange(0.1, 10.0 + 1e-9, 0.1), 10)


def _f_wigner_yanase(t: float) -> float:
    return (1.0 + math.sqrt(t)) ** 2 / 4.0


def _f_min(t: float) -> float:
    return 2.0 * t / (1.0 + t)


def _f_max(t: float) -> float:
    return (1.0 + t) / 2.0


WIGNER_YANASE = MCFunction(
    name=MetricName.WIGNER_YANASE,
    f=_f_wigner_yanase,
    c_closed=lambda x, y: 4.0 / (math.sqrt(x) + math.sqrt(y)) ** 2,
    label="Wigner-Yanase",
)

F_MIN = MCFunction(
    name=MetricName.MIN,
    f=_f_min,
    c_closed=lambda x, y: (x + y) / (2.0 * x * y),
    label="minimal MC function (largest metric)",
)

F_MAX = MCFunction(
    name=MetricName.MAX,
    f=_f_max,
    c_closed=lambda x, y: 2.0 / (x + y),
    label="maximal MC function (Bures)",
)

METRICS = {m.name: m for m in (WIGNER_YANASE, F_MIN, F_MAX)}


def get_metric(name) -> MCFunction:
    """Look up a built-in metric by name."""
    name = MetricName(name)
    if name not in METRICS:
        raise ValueError(f"metric '{name.value}' is not built in; use make_metric for custom functions")
    return METRICS[name]


def make_metric(f: Callable[[float], float], label: str = "custom", tol: float = 1e-12) -> MCFunction:
    """
    Register a custom MC function after checking admissibility.

    The checks run on t = 0.1, 0.2, ..., 10: normalization f(1) = 1, the
    symmetry f(t) = t f(1/t) and the bounds f_min <= f <= f_max.

    Raises:
        ValueError: if any check fails
    """
    if abs(f(1.0) - 1.0) > tol:
        raise ValueError(f"{label}: f(1)={f(1.0)!r}, expected 1")
    for t in _CHECK_GRID:
        value = f(t)
        if abs(value - t * f(1.0 / t)) > tol * max(1.0, abs(value)):
            raise ValueError(f"{label}: f(t) != t f(1/t) at t={t}")
        if not (_f_min(t) - tol <= value <= _f_max(t) + tol):
            raise ValueError(f"{label}: f({t})={value!r} outside [f_min, f_max]")
    return MCFunction(name=MetricName.CUSTOM, f=f, label=label)


def mc_c(metric: MCFunction, x: float, y: float) -> float:
    """Symmetric function c(x, y) = 1 / (y f(x/y)) of a metric."""
    if x <= 0 or y <= 0:
        raise ValueError(f"c(x, y) needs positive arguments, got ({x!r}, {y!r})")
    return metric.c(x, y)


def metric_speed(decomp: SpectralDecomp, rhodot: np.ndarray, metric: MCFunction) -> float:
    """
    Metric norm of a tangent vector at a state.

    V^2 = 1/4 sum_{k,l} c(p_k, p_l) |<v_k| rhodot |v_l>|^2 with eigenvalues
    floored at EIGEN_CLIP inside c. Phases of the eigenvectors cancel in
    the squared moduli.

    Args:
        decomp: Eigen-system of the state
        rhodot: Traceless Hermitian time derivative at the same time
        metric: MC function defining the metric

    Returns:
        Instantaneous speed V >= 0
    """
    basis = np.column_stack(decomp.eigenvectors)
    rotated = basis.conj().T @ np.asarray(rhodot, dtype=complex) @ basis
    p = [max(value, config.EIGEN_CLIP) for value in decomp.eigenvalues]

    total = 0.0
    for k in range(2):
        for l in range(2):
            total += metric.c(p[k], p[l]) * abs(rotated[k, l]) ** 2
    return 0.5 * math.sqrt(total)


def spectral_speed(
    decomp: SpectralDecomp,
    rhodot: np.ndarray,
    metric: MCFunction,
    gap_tol: float = 1e-12,
) -> float:
    """
    Speed from the eigenvalue-rate plus eigenvector-rotation decomposition.

    Population term sum_k pdot_k^2 / (4 p_k), rotation term
    sum_{k != l} c(p_k, p_l) p_k (p_k - p_l) / 2 |<v_l|dv_k>|^2 with the
    overlap recovered as |<v_l|rhodot|v_k>| / |p_k - p_l|. Undefined at a
    degenerate spectrum.
    """
    p = decomp.eigenvalues
    if abs(p[0] - p[1]) < gap_tol:
        raise ValueError("spectral form needs a nondegenerate spectrum")
    vectors = decomp.eigenvectors
    rhodot = np.asarray(rhodot, dtype=complex)

    def element(k, l):
        return np.vdot(vectors[k], rhodot @ vectors[l])

    population = sum(element(k, k).real ** 2 / (4.0 * p[k]) for k in range(2))
    rotation = 0.0
    for k in range(2):
        for l in range(2):
            if k == l:
                continue
            overlap_sq = abs(element(l, k)) ** 2 / (p[k] - p[l]) ** 2
            rotation += metric.c(p[k], p[l]) * p[k] * (p[k] - p[l]) / 2.0 * overlap_sq
    return math.sqrt(population + rotation)


def _speed_from_amplitude(
    beta: float,
    c: complex,
    cdot: complex,
    metric: MCFunction,
    t: float = 0.0,
    real_coherence: bool = False,
) -> float:
    state = evolve_state(beta, c, t, real_coherence)
    rhodot = state_derivative(beta, c, cdot, real_coherence)
    return metric_speed(spectral_decompose(state), rhodot, metric)


def instantaneous_speed(
    trace: AmplitudeTrace,
    beta: float,
    metric: MCFunction,
    t: float,
    real_coherence: bool = False,
) -> float:
    """Speed at an arbitrary time inside the trace (right limit at kinks)."""
    return _speed_from_amplitude(
        beta, trace.value_at(t), trace.derivative_at(t), metric, t, real_coherence
    )


def speed_series(
    trace: AmplitudeTrace,
    beta: float,
    metric: MCFunction,
    real_coherence: bool = False,
) -> np.ndarray:
    """
    Speed at every grid point.

    The initial state is pure, so V(0) is infinite whenever it moves at all.
    For beta == 1 the state stays diagonal and every metric reduces to
    |Pdot| / (2 sqrt(P (1 - P))).
    """
    if beta == 0.0:
        return np.zeros(trace.grid.shape)

    speeds = np.empty(trace.grid.shape)
    speeds[0] = math.inf
    if beta == 1.0:
        p = trace.population[1:]
        pdot = 2.0 * np.real(np.conj(trace.c[1:]) * trace.cdot[1:])
        with np.errstate(divide="ignore", invalid="ignore"):
            speeds[1:] = np.abs(pdot) / (2.0 * np.sqrt(p * (1.0 - p)))
        return speeds

    for k in range(1, len(trace.grid)):
        speeds[k] = _speed_from_amplitude(
            beta, trace.c[k], trace.cdot[k], metric, trace.grid[k], real_coherence
        )
    return speeds


def endpoint_limit(beta: float, decay: float, metric: MCFunction, real_coherence: bool = False) -> float:
    """
    Limit of V(t) sqrt(t) as t -> 0+, squared.

    The small eigenvalue grows like 2 A beta^4 t, which gives the population
    term A beta^4 / 2. The rotation term only survives for metrics whose
    c(1, y) diverges like kappa / y, kappa = lim y / f(y).
    """
    state = evolve_state(beta, 1.0 + 0j, 0.0, real_coherence)
    decomp = spectral_decompose(state)
    rhodot = state_derivative(beta, 1.0 + 0j, -decay + 0j, real_coherence)
    cross = np.vdot(decomp.v_plus, rhodot @ decomp.v_minus)

    b4 = beta ** 4
    kappa = metric.degenerate_weight()
    return decay * b4 / 2.0 + kappa * abs(cross) ** 2 / (4.0 * decay * b4)


def average_speed(
    trace: AmplitudeTrace,
    beta: float,
    metric: MCFunction,
    tau: float,
    rel_tol: float = None,
    real_coherence: bool = False,
) -> float:
    """
    Time-averaged speed (1/tau) * integral of V over [0, tau].

    The domain is split at every delay multiple. On the first piece the
    substitution t = u^2 removes the t^{-1/2} singularity at the pure
    initial state and the derivative is the gated-off one up to and
    including t_d, so the kink never leaks into that piece.

    Args:
        trace: Amplitude trace covering [0, tau]
        beta: Initial-state weight
        metric: MC function
        tau: Averaging horizon
        rel_tol: Relative quadrature tolerance (default QUAD_REL_TOL)
        real_coherence: Use |c| in the coherence

    Returns:
        V_a
    """
    if tau <= 0:
        raise ValueError(f"tau={tau!r} must be positive")
    if tau > trace.horizon * (1 + 1e-12):
        raise ValueError(f"tau={tau} is beyond the trace horizon {trace.horizon}")
    if beta == 0.0:
        return 0.0

    rel_tol = rel_tol or config.QUAD_REL_TOL
    frame = trace.frame
    first_end = min(frame.t_delay, tau)
    head_limit = 2.0 * math.sqrt(endpoint_limit(beta, frame.decay, metric, real_coherence))

    def head(u: float) -> float:
        if u == 0.0:
            return head_limit
        t = min(u * u, first_end)
        c = trace.value_at(t)
        return 2.0 * u * _speed_from_amplitude(beta, c, -frame.decay * c, metric, t, real_coherence)

    def tail(t: float) -> float:
        return instantaneous_speed(trace, beta, metric, t, real_coherence)

    pieces = [(head, 0.0, math.sqrt(first_end))]
    bounds = [first_end] + trace.delay_multiples(tau)[1:] + [tau]
    pieces += [(tail, a, b) for a, b in zip(bounds[:-1], bounds[1:])]

    integral = integrate_pieces(pieces, rel_tol=rel_tol, max_depth=config.QUAD_MAX_DEPTH)
    logger.debug("Average speed: %d pieces, integral %.10g", len(pieces), integral)
    return integral / tau
