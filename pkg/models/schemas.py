"""Data models and schemas for the simulator."""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Callable, Optional

import numpy as np
import pandas as pd

import config
from utils.numerics import hermite_interpolate


TWO_PI = 2.0 * math.pi


class AmplitudeMethod(str, Enum):
    SERIES = "series"
    DDE = "dde"


class MetricName(str, Enum):
    WIGNER_YANASE = "wigner-yanase"
    MIN = "min"
    MAX = "max"
    CUSTOM = "custom"


class SweepVariable(str, Enum):
    PHI = "phi"
    OMEGA = "omega"
    T_DELAY = "t_delay"


class OutputKind(str, Enum):
    TRACE = "trace"
    SPEED = "speed"
    FLOW = "flow"


class OutputFormat(str, Enum):
    CSV = "csv"
    SVG = "svg"


@dataclass(frozen=True)
class PhysicalParams:
    """Raw model inputs in units of Gamma."""
    gamma: float = config.DEFAULT_GAMMA
    omega: float = 0.0
    delta: float = 0.0
    phi: float = 0.0
    t_delay: float = 2.0
    beta: float = 1.0
    tau: float = config.DEFAULT_TAU

    def __post_init__(self):
        checks = [
            ("gamma", self.gamma > 0, "must be positive"),
            ("t_delay", self.t_delay > 0, "must be positive"),
            ("tau", self.tau > 0, "must be positive"),
            ("beta", 0.0 <= self.beta <= 1.0, "must lie in [0, 1]"),
            ("omega", self.omega >= 0, "must be non-negative"),
        ]
        for name, ok, reason in checks:
            value = getattr(self, name)
            if not (ok and math.isfinite(value)):
                raise ValueError(f"{name}={value!r} {reason}")
        if not (math.isfinite(self.delta) and math.isfinite(self.phi)):
            raise ValueError("delta and phi must be finite")
        object.__setattr__(self, "phi", self.phi % TWO_PI)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DressedFrame:
    """Derived quantities that parameterize the delay equation."""
    eta: float
    omega_ef: float
    omega_x: float
    decay: float
    chi: float
    feedback: complex
    t_delay: float

    def derivative(self, c_now: complex, c_delayed: complex, t: float) -> complex:
        """Right-hand side of the delay equation; the gate is open at t == t_delay."""
        rate = -self.decay * c_now
        if t >= self.t_delay:
            rate += self.feedback * c_delayed
        return rate

    def to_dict(self) -> dict:
        return {
            "eta": self.eta,
            "omega_ef": self.omega_ef,
            "omega_x": self.omega_x,
            "decay": self.decay,
            "chi": self.chi,
            "feedback_re": self.feedback.real,
            "feedback_im": self.feedback.imag,
            "t_delay": self.t_delay,
        }


@dataclass(frozen=True, eq=False)
class AmplitudeTrace:
    """
    Excited-state amplitude sampled on a delay-aligned grid.

    Off-grid values come from cubic Hermite interpolation of the stored
    values and derivatives. Before the first delay the feedback is gated
    off and the closed form exp(-A t) is returned.
    """
    frame: DressedFrame
    grid: np.ndarray
    c: np.ndarray
    cdot: np.ndarray
    method: AmplitudeMethod = AmplitudeMethod.SERIES

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    @property
    def population(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    def value_at(self, t: float) -> complex:
        """Amplitude at an arbitrary time inside the trace."""
        if t < 0 or t > self.horizon * (1 + 1e-12):
            raise ValueError(f"t={t} outside trace range [0, {self.horizon}]")
        if t < self.frame.t_delay:
            return complex(math.exp(-self.frame.decay * t))
        j = int(np.searchsorted(self.grid, t, side="right")) - 1
        j = min(max(j, 0), len(self.grid) - 2)
        h = self.grid[j + 1] - self.grid[j]
        return complex(hermite_interpolate(
            self.c[j], self.c[j + 1], self.cdot[j], self.cdot[j + 1], h, (t - self.grid[j]) / h
        ))

    def derivative_at(self, t: float) -> complex:
        """Exact derivative from the delay equation at an arbitrary time."""
        c_now = self.value_at(t)
        c_delayed = self.value_at(t - self.frame.t_delay) if t >= self.frame.t_delay else 0j
        return self.frame.derivative(c_now, c_delayed, t)

    def delay_multiples(self, stop: Optional[float] = None) -> list[float]:
        """Delay multiples n*t_d in (0, stop)."""
        stop = self.horizon if stop is None else stop
        count = int(math.floor(stop / self.frame.t_delay))
        return [n * self.frame.t_delay for n in range(1, count + 1) if n * self.frame.t_delay < stop]


@dataclass(frozen=True, eq=False)
class QubitState:
    """2x2 density matrix in the dressed basis {|+>, |->}."""
    matrix: np.ndarray
    t: float = 0.0

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def is_valid(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        hermitian = np.allclose(m, m.conj().T, atol=tol)
        eigenvalues = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return bool(hermitian and abs(self.trace - 1.0) < tol and eigenvalues.min() >= -tol)


@dataclass(frozen=True, eq=False)
class SpectralDecomp:
    """Eigen-system of a qubit state, p_plus >= p_minus."""
    p_plus: float
    p_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return self.p_plus, self.p_minus

    @property
    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        return self.v_plus, self.v_minus

    def reconstruct(self) -> np.ndarray:
        return (self.p_plus * np.outer(self.v_plus, self.v_plus.conj())
                + self.p_minus * np.outer(self.v_minus, self.v_minus.conj()))


@dataclass(frozen=True, eq=False)
class MCFunction:
    """Morozova-Cencov function with optional closed-form symmetric function c(x, y)."""
    name: MetricName
    f: Callable[[float], float]
    c_closed: Optional[Callable[[float, float], float]] = None
    label: str = ""

    def c(self, x: float, y: float) -> float:
        if self.c_closed is not None:
            return self.c_closed(x, y)
        return 1.0 / (y * self.f(x / y))

    def degenerate_weight(self, y: float = 1e-12) -> float:
        """Limit of y / f(y) as y -> 0; nonzero only for metrics that diverge at pure states."""
        return y / self.f(y)


@dataclass
class FlowReport:
    """Trace-distance information flow along one trace."""
    d0: float
    dtau: float
    aleph: float
    aleph_total: float
    extrema: list[tuple[float, float]] = field(default_factory=list)


@dataclass
class MeasureReport:
    """Scalar outputs of one run."""
    params: PhysicalParams
    average_speed: float
    aleph: float
    aleph_total: float
    final_population: float
    steady_population: float

    def to_dict(self) -> dict:
        return {
            **self.params.to_dict(),
            "V_a": self.average_speed,
            "aleph": self.aleph,
            "aleph_total": self.aleph_total,
            "P_tau": self.final_population,
            "P_steady": self.steady_population,
        }


@dataclass(frozen=True)
class SweepSpec:
    """Linear sweep over one physical parameter."""
    variable: SweepVariable
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if isinstance(self.variable, str):
            object.__setattr__(self, "variable", SweepVariable(self.variable))
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("sweep bounds must be finite")
        if self.count < 2:
            raise ValueError(f"sweep count={self.count} must be at least 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class RunConfig:
    """Everything one invocation needs."""
    params: PhysicalParams = field(default_factory=PhysicalParams)
    sweep: Optional[SweepSpec] = None
    metric: MetricName = MetricName.WIGNER_YANASE
    outputs: frozenset = frozenset(OutputKind)
    format: OutputFormat = OutputFormat.CSV
    normalize: Optional[float] = None
    grid_n: int = config.DEFAULT_GRID_N
    verify: bool = False
    real_coherence: bool = False
    method: AmplitudeMethod = AmplitudeMethod.SERIES
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.metric, str):
            self.metric = MetricName(self.metric)
        if isinstance(self.format, str):
            self.format = OutputFormat(self.format)
        if isinstance(self.method, str):
            self.method = AmplitudeMethod(self.method)
        self.outputs = frozenset(OutputKind(o) for o in self.outputs)
        if self.grid_n < config.MIN_GRID_N:
            raise ValueError(f"grid_n={self.grid_n} must be at least {config.MIN_GRID_N}")
        if self.normalize is not None and not (self.normalize > 0 and math.isfinite(self.normalize)):
            raise ValueError(f"normalize={self.normalize!r} must be a positive number")
        if self.workers < 1:
            raise ValueError(f"workers={self.workers} must be at least 1")


@dataclass
class ResultTable:
    """A run's tabular result plus the metadata needed to emit it."""
    data: pd.DataFrame
    x: str
    y: list[str]
    group: Optional[str] = None
    comments: list[str] = field(default_factory=list)
    title: str = ""

    @property
    def is_empty(self) -> bool:
        return self.data.empty
