"""Dressed-frame algebra: raw parameters to the coefficients of the delay equation."""

import cmath
import math
from dataclasses import replace

from models.schemas import DressedFrame, PhysicalParams, TWO_PI


def derive_frame(params: PhysicalParams) -> DressedFrame:
    """
    Map raw inputs to the dressed-frame quantities.

    The undriven qubit (omega == 0) uses eta = 0 for any detuning sign, so
    the bare state decays at the full rate Gamma/2. For omega > 0 the angle
    is atan2(2*omega, delta), which lies in (pi/2, pi) for negative detuning.

    Args:
        params: Validated physical parameters

    Returns:
        DressedFrame with chi reduced modulo 2*pi
    """
    if params.omega == 0.0:
        eta = 0.0
    else:
        eta = math.atan2(2.0 * abs(params.omega), params.delta)

    omega_ef = math.hypot(params.delta, 2.0 * params.omega)
    omega_x = omega_ef - params.delta
    decay = math.cos(eta / 2.0) ** 4 * params.gamma / 2.0
    chi = (omega_x * params.t_delay + params.phi) % TWO_PI

    return DressedFrame(
        eta=eta,
        omega_ef=omega_ef,
        omega_x=omega_x,
        decay=decay,
        chi=chi,
        feedback=decay * cmath.exp(1j * chi),
        t_delay=params.t_delay,
    )


def from_geometry(x0: float, v: float, k0: float, **rest) -> PhysicalParams:
    """
    Build parameters from the qubit-mirror geometry.

    Args:
        x0: Qubit distance from the mirror
        v: Group velocity in the waveguide
        k0: Carrier wavevector
        **rest: Remaining PhysicalParams fields (gamma, omega, delta, beta, tau)

    Returns:
        PhysicalParams with t_delay = 2*x0/v and phi = 2*k0*x0 mod 2*pi
    """
    for name, value in (("x0", x0), ("v", v), ("k0", k0)):
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name}={value!r} must be positive")
    for name in ("t_delay", "phi"):
        if name in rest:
            raise ValueError(f"{name} is fixed by the geometry and cannot be passed")

    return PhysicalParams(t_delay=2.0 * x0 / v, phi=(2.0 * k0 * x0) % TWO_PI, **rest)


def laplace_image(frame: DressedFrame, s: complex) -> complex:
    """Laplace image of the amplitude, 1 / (s + A - A e^{i chi} e^{-s t_d}), for Re s > 0."""
    if s.real <= 0:
        raise ValueError(f"s={s!r} must have a positive real part")
    return 1.0 / (s + frame.decay - frame.feedback * cmath.exp(-s * frame.t_delay))


def chi_is_zero(frame: DressedFrame, tol: float) -> bool:
    """Feedback phase within tol of 0 modulo 2*pi."""
    return min(frame.chi, TWO_PI - frame.chi) <= tol


def scaled(params: PhysicalParams, s: float) -> PhysicalParams:
    """Rescale rates by s and times by 1/s; the dimensionless physics is unchanged."""
    return replace(
        params,
        gamma=params.gamma * s,
        omega=params.omega * s,
        delta=params.delta * s,
        t_delay=params.t_delay / s,
        tau=params.tau / s,
    )
