"""Numerical building blocks: compensated summation, adaptive quadrature, Hermite interpolation."""

from collections.abc import Callable

import numpy as np


class CompensatedSum:
    """
    Second-order Kahan-Babuska (Klein) accumulator.

    Works elementwise on arrays of any shape. Complex input is accumulated
    as independent real and imaginary parts, each with its own compensation.

    Example:
        >>> acc = CompensatedSum(shape=(3,), complex_valued=True)
        >>> acc += np.array([1e16, 1.0, 1j])
        >>> acc += np.array([-1e16, 1.0, 1j])
        >>> acc.get()
        array([0.+0.j, 2.+0.j, 0.+2.j])
    """

    def __init__(self, shape: tuple = (), complex_valued: bool = False):
        self.complex_valued = complex_valued
        parts = 2 if complex_valued else 1
        self._s = np.zeros((parts, *shape))
        self._cs = np.zeros((parts, *shape))
        self._ccs = np.zeros((parts, *shape))

    def _split(self, x) -> np.ndarray:
        x = np.asarray(x)
        if self.complex_valued:
            return np.stack([x.real, x.imag]).astype(float)
        return x.real[np.newaxis].astype(float)

    def __iadd__(self, x):
        x = np.broadcast_to(self._split(x), self._s.shape)
        s, cs = self._s, self._cs

        t = s + x
        c = np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
        s = t
        t = cs + c
        cc = np.where(np.abs(cs) >= np.abs(c), (cs - t) + c, (c - t) + cs)

        self._s, self._cs = s, t
        self._ccs = self._ccs + cc
        return self

    def get(self):
        total = self._s + self._cs + self._ccs
        if self.complex_valued:
            value = total[0] + 1j * total[1]
        else:
            value = total[0]
        return value[()] if value.ndim == 0 else value

    def __repr__(self):
        return f"CompensatedSum({self.get()})"


def hermite_interpolate(y0, y1, d0, d1, h: float, theta: float):
    """
    Cubic Hermite interpolation on one step of width h.

    Args:
        y0, y1: Values at the step ends
        d0, d1: Derivatives at the step ends
        h: Step width
        theta: Fractional position in [0, 1]

    Returns:
        Interpolated value (same type as the inputs)
    """
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + theta
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> tuple[float, float]:
    """
    Adaptive Simpson's rule integration.

    Uses recursive subdivision to achieve desired tolerance.
    Endpoints are evaluated, so f must be finite on [a, b].

    Args:
        f: Function to integrate.
        a: Lower bound.
        b: Upper bound.
        tol: Absolute error tolerance.
        max_depth: Maximum recursion depth.

    Returns:
        Tuple of (integral_value, error_estimate).
    """
    if a == b:
        return 0.0, 0.0

    if a > b:
        result, error = adaptive_simpson(f, b, a, tol, max_depth)
        return -result, error

    def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def _adaptive(a, b, fa, fm, fb, s_whole, depth, tol):
        m = (a + b) / 2.0
        h = (b - a) / 2.0
        lm = (a + m) / 2.0
        rm = (m + b) / 2.0
        flm = f(lm)
        frm = f(rm)

        s_left = _simpson(fa, flm, fm, h / 2.0)
        s_right = _simpson(fm, frm, fb, h / 2.0)
        s_combined = s_left + s_right

        error_estimate = (s_combined - s_whole) / 15.0

        if depth >= max_depth or abs(error_estimate) < tol:
            # Richardson extrapolation
            return s_combined + error_estimate, abs(error_estimate)

        left_result, left_error = _adaptive(a, m, fa, flm, fm, s_left, depth + 1, tol / 2.0)
        right_result, right_error = _adaptive(m, b, fm, frm, fb, s_right, depth + 1, tol / 2.0)
        return left_result + right_result, left_error + right_error

    fa = f(a)
    fb = f(b)
    m = (a + b) / 2.0
    fm = f(m)
    s_whole = _simpson(fa, fm, fb, (b - a) / 2.0)

    return _adaptive(a, b, fa, fm, fb, s_whole, 0, tol)


def integrate_pieces(
    pieces: list[tuple[Callable[[float], float], float, float]],
    rel_tol: float = 1e-6,
    abs_floor: float = 1e-14,
    max_depth: int = 50,
) -> float:
    """
    Sum adaptive Simpson integrals over (f, a, b) pieces.

    A coarse Simpson pass sizes one absolute tolerance so the total meets
    rel_tol; each piece gets a share of it proportional to its width and the
    results are summed in piece order.
    """
    pieces = [(f, a, b) for f, a, b in pieces if b > a]
    if not pieces:
        return 0.0
    span = sum(b - a for _, a, b in pieces)
    coarse = sum(abs((b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b))) for f, a, b in pieces)
    budget = max(rel_tol * coarse, abs_floor)

    total = CompensatedSum()
    for f, a, b in pieces:
        value, _ = adaptive_simpson(f, a, b, budget * (b - a) / span, max_depth)
        total += value
    return float(total.get())

