"""Services package for the delayed-feedback qubit simulation."""

from .frame import derive_frame, from_geometry, laplace_image
from .amplitude import (
    amplitude_dde,
    amplitude_derivative,
    amplitude_series,
    compute_trace,
    series_trace,
    steady_population,
    verify_steady_population,
)
from .qstate import apply_channel, evolve_state, spectral_decompose, state_derivative
from .geometry import (
    F_MAX,
    F_MIN,
    WIGNER_YANASE,
    average_speed,
    get_metric,
    make_metric,
    mc_c,
    metric_speed,
    spectral_speed,
    speed_series,
)
from .infoflow import (
    find_extrema,
    flow_quadrature,
    flow_rate,
    flow_report,
    non_markovianity,
    optimal_pair_distance,
    sigma_rate,
    total_flow,
    trace_distance,
)
from .experiment import SweepError, VerificationError, measure, run_sweep, run_trace
from .presets import PRESETS, get_preset, run_preset

__all__ = [
    "derive_frame",
    "from_geometry",
    "laplace_image",
    "amplitude_dde",
    "amplitude_derivative",
    "amplitude_series",
    "compute_trace",
    "series_trace",
    "steady_population",
    "verify_steady_population",
    "apply_channel",
    "evolve_state",
    "spectral_decompose",
    "state_derivative",
    "F_MAX",
    "F_MIN",
    "WIGNER_YANASE",
    "average_speed",
    "get_metric",
    "make_metric",
    "mc_c",
    "metric_speed",
    "spectral_speed",
    "speed_series",
    "find_extrema",
    "flow_quadrature",
    "flow_rate",
    "flow_report",
    "non_markovianity",
    "optimal_pair_distance",
    "sigma_rate",
    "total_flow",
    "trace_distance",
    "SweepError",
    "VerificationError",
    "measure",
    "run_sweep",
    "run_trace",
    "PRESETS",
    "get_preset",
    "run_preset",
]
