"""Excited-state amplitude of the delayed-feedback equation.

Two independent routes to the same trace: the finite series obtained by
inverting the Laplace image, and a method-of-steps RK4 integration of the
delay equation itself. Both sample on a delay-aligned grid so every delay
multiple n*t_d is an exact grid point.
"""

import logging
import math
import time
from typing import Optional

import numpy as np
from scipy.special import gammaln

import config
from models.schemas import AmplitudeMethod, AmplitudeTrace, DressedFrame
from services.frame import chi_is_zero
from utils.numerics import CompensatedSum, hermite_interpolate

logger = logging.getLogger(__name__)


def delay_grid(t_delay: float, horizon: float, grid_n: int) -> np.ndarray:
    """
    Time grid with grid_n points per delay interval, ending exactly at horizon.

    Points are built as (k // N) * t_d + (k % N) * h so that delay multiples
    come out bit-identical to n * t_d.
    """
    if horizon <= 0:
        raise ValueError(f"horizon={horizon!r} must be positive")
    if grid_n < 1:
        raise ValueError(f"grid_n={grid_n} must be positive")

    h = t_delay / grid_n
    count = int(math.ceil(horizon / h)) + 1
    k = np.arange(count)
    grid = (k // grid_n) * t_delay + (k % grid_n) * h
    grid = grid[grid < horizon - 1e-9 * h]
    return np.append(grid, horizon)


def series_values(frame: DressedFrame, times) -> np.ndarray:
    """
    Vectorized series solution at an array of times.

    Term n is exp(-A u + n log(A u) - log n!) * e^{i n chi} with u = t - n t_d,
    which is the e^{-A t} prefactor folded into the power. Terms with u <= 0
    vanish for n >= 1.
    """
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(t < 0):
        raise ValueError("series times must be non-negative")

    a = frame.decay
    acc = CompensatedSum(shape=t.shape, complex_valued=True)
    acc += np.exp(-a * t).astype(complex)

    n_max = int(np.floor(t.max() / frame.t_delay)) if t.size else 0
    for n in range(1, n_max + 1):
        u = t - n * frame.t_delay
        active = u > 0
        if not active.any():
            break
        log_mag = np.full(t.shape, -np.inf)
        ua = a * u[active]
        log_mag[active] = -ua + n * np.log(ua) - gammaln(n + 1)
        acc += np.exp(log_mag) * np.exp(1j * n * frame.chi)

    return np.asarray(acc.get(), dtype=complex).reshape(t.shape)


def amplitude_series(frame: DressedFrame, t: float) -> complex:
    """
    Exact amplitude at time t from the truncated series.

    Args:
        frame: Dressed-frame coefficients
        t: Time, t >= 0

    Returns:
        Complex amplitude c(t); c(0) == 1 exactly
    """
    return complex(series_values(frame, [t])[0])


def amplitude_derivative(
    frame: DressedFrame,
    c_now: complex,
    c_delayed: Optional[complex],
    t: float,
) -> complex:
    """
    Right-hand side of the delay equation.

    The gate is open from t == t_d onward (right-limit convention at the
    kink). c_delayed is ignored while the gate is closed.
    """
    if t < frame.t_delay or c_delayed is None:
        return -frame.decay * c_now
    return frame.derivative(c_now, c_delayed, t)


def series_trace(frame: DressedFrame, horizon: float, grid_n: int = None) -> AmplitudeTrace:
    """Sample the series solution and its exact derivative on the delay grid."""
    grid_n = grid_n or config.DEFAULT_GRID_N
    grid = delay_grid(frame.t_delay, horizon, grid_n)

    c = series_values(frame, grid)
    gated = grid >= frame.t_delay
    delayed = np.zeros_like(c)
    if gated.any():
        delayed[gated] = series_values(frame, grid[gated] - frame.t_delay)
    cdot = -frame.decay * c + np.where(gated, frame.feedback * delayed, 0j)

    return AmplitudeTrace(frame=frame, grid=grid, c=c, cdot=cdot, method=AmplitudeMethod.SERIES)


def amplitude_dde(frame: DressedFrame, step: float, horizon: float) -> AmplitudeTrace:
    """
    Method-of-steps RK4 integration of the delay equation.

    Each step reads its delayed values from the already computed grid by
    cubic Hermite interpolation. The feedback gate is decided per segment,
    so a step that ends exactly on a delay multiple still integrates with the
    left-segment equation and the derivative jump lands on the grid point.

    Args:
        frame: Dressed-frame coefficients
        step: Step width; must equal t_d / N for an integer N >= MIN_GRID_N
        horizon: Final time

    Returns:
        AmplitudeTrace tagged with the dde method
    """
    if not (step > 0 and math.isfinite(step)):
        raise ValueError(f"step={step!r} must be positive")
    grid_n = int(round(frame.t_delay / step))
    if grid_n < 1 or abs(grid_n * step - frame.t_delay) > 1e-9 * frame.t_delay:
        raise ValueError(f"step={step!r} does not divide t_delay={frame.t_delay!r}")
    if grid_n < config.MIN_GRID_N:
        raise ValueError(f"step={step!r} gives {grid_n} points per delay, need at least {config.MIN_GRID_N}")

    started = time.perf_counter()
    grid = delay_grid(frame.t_delay, horizon, grid_n)
    h = frame.t_delay / grid_n
    a, b = frame.decay, frame.feedback

    c = [1.0 + 0j]
    # right-limit derivatives, and left-limit ones for the delayed lookup
    d_right = [-a + 0j]
    d_left = [-a + 0j]

    for k in range(len(grid) - 1):
        hk = grid[k + 1] - grid[k]
        ck = c[k]
        gate = k >= grid_n

        if gate:
            j = k - grid_n
            y0, y1 = c[j], c[j + 1]
            s0, s1 = d_right[j], d_left[j + 1]
            del_0 = y0
            del_m = hermite_interpolate(y0, y1, s0, s1, h, 0.5 * hk / h)
            del_1 = y1 if hk == h else hermite_interpolate(y0, y1, s0, s1, h, hk / h)
            k1 = -a * ck + b * del_0
            k2 = -a * (ck + 0.5 * hk * k1) + b * del_m
            k3 = -a * (ck + 0.5 * hk * k2) + b * del_m
            k4 = -a * (ck + hk * k3) + b * del_1
        else:
            del_1 = None
            k1 = -a * ck
            k2 = -a * (ck + 0.5 * hk * k1)
            k3 = -a * (ck + 0.5 * hk * k2)
            k4 = -a * (ck + hk * k3)

        c_next = ck + hk / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        c.append(c_next)

        left = -a * c_next + (b * del_1 if gate else 0j)
        # the gate opens at t_d, the only node where the derivative jumps
        right = -a * c_next + b * c[0] if k + 1 == grid_n else left
        d_left.append(left)
        d_right.append(right)

    logger.debug(
        "DDE trace: %d steps over [0, %.6g] in %.3fs",
        len(grid) - 1, horizon, time.perf_counter() - started,
    )
    return AmplitudeTrace(
        frame=frame,
        grid=grid,
        c=np.array(c, dtype=complex),
        cdot=np.array(d_right, dtype=complex),
        method=AmplitudeMethod.DDE,
    )


def compute_trace(
    frame: DressedFrame,
    horizon: float,
    grid_n: int = None,
    method: AmplitudeMethod = AmplitudeMethod.SERIES,
) -> AmplitudeTrace:
    """Build a trace with the requested method."""
    grid_n = grid_n or config.DEFAULT_GRID_N
    if AmplitudeMethod(method) == AmplitudeMethod.DDE:
        return amplitude_dde(frame, frame.t_delay / grid_n, horizon)
    return series_trace(frame, horizon, grid_n)


def max_disagreement(first: AmplitudeTrace, second: AmplitudeTrace) -> float:
    """Largest pointwise |c1 - c2| between two traces on the same grid."""
    if first.grid.shape != second.grid.shape or not np.array_equal(first.grid, second.grid):
        raise ValueError("traces are sampled on different grids")
    return float(np.max(np.abs(first.c - second.c)))


def steady_population(frame: DressedFrame, tol: float = None) -> float:
    """
    Long-time excited population.

    Only constructive feedback (chi == 0 mod 2*pi) leaves a pole at s = 0;
    its residue gives 1 / (1 + A t_d). Every other phase decays to zero.
    """
    tol = config.CHI_ZERO_TOL if tol is None else tol
    if not chi_is_zero(frame, tol):
        return 0.0
    return 1.0 / (1.0 + frame.decay * frame.t_delay) ** 2


def verify_steady_population(
    frame: DressedFrame,
    horizon: float = None,
    tol: float = None,
) -> float:
    """
    Compare steady_population with the series value at a long horizon.

    Returns the observed population. A disagreement beyond tol is logged as
    a warning, not raised: phases near zero decay slowly and sit above the
    limit at any finite time.
    """
    horizon = horizon or config.STEADY_CHECK_HORIZON
    tol = config.STEADY_CHECK_TOL if tol is None else tol

    observed = abs(amplitude_series(frame, horizon)) ** 2
    expected = steady_population(frame)
    if abs(observed - expected) > tol:
        logger.warning(
            "Steady population check: P(%.6g)=%.6g but limit is %.6g (chi=%.6g)",
            horizon, observed, expected, frame.chi,
        )
    return observed
