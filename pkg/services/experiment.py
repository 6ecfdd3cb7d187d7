"""Run one trace or a parameter sweep and assemble the result tables."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Optional

import numpy as np
import pandas as pd

import config
from models.schemas import (
    AmplitudeMethod,
    AmplitudeTrace,
    MeasureReport,
    MetricName,
    OutputKind,
    PhysicalParams,
    ResultTable,
    RunConfig,
)
from services.amplitude import (
    compute_trace,
    max_disagreement,
    steady_population,
    verify_steady_population,
)
from services.frame import derive_frame
from services.geometry import average_speed, get_metric, speed_series
from services.infoflow import flow_rate, flow_report, sigma_rate

logger = logging.getLogger(__name__)

TRACE_COLUMNS = {
    OutputKind.TRACE: ["re_c", "im_c", "P"],
    OutputKind.SPEED: ["V"],
    OutputKind.FLOW: ["sigma", "R"],
}


class VerificationError(RuntimeError):
    """Series and DDE amplitudes disagree beyond the tolerance."""

    def __init__(self, disagreement: float, tolerance: float, params: PhysicalParams):
        self.disagreement = disagreement
        self.tolerance = tolerance
        self.params = params
        super().__init__(
            f"series/DDE disagreement {disagreement:.3e} exceeds {tolerance:.1e} for {params.to_dict()}"
        )

    def __reduce__(self):
        return self.__class__, (self.disagreement, self.tolerance, self.params)


class SweepError(RuntimeError):
    """A sweep point failed; carries the offending parameters and the cause."""

    def __init__(self, params: PhysicalParams, cause: Exception):
        self.params = params
        self.cause = cause
        super().__init__(f"sweep point {params.to_dict()} failed: {cause}")

    def __reduce__(self):
        return self.__class__, (self.params, self.cause)

    @property
    def is_verification_failure(self) -> bool:
        return isinstance(self.cause, VerificationError)


def build_trace(
    params: PhysicalParams,
    grid_n: int = None,
    method: AmplitudeMethod = AmplitudeMethod.SERIES,
    verify: bool = False,
    tolerance: float = None,
) -> AmplitudeTrace:
    """
    Amplitude trace over [0, tau], optionally cross-checked by the other method.

    Raises:
        VerificationError: if verify is set and the methods disagree
    """
    grid_n = grid_n or config.DEFAULT_GRID_N
    tolerance = tolerance or config.VERIFY_TOL
    frame = derive_frame(params)
    logger.debug("Dressed frame: %s", frame.to_dict())
    trace = compute_trace(frame, params.tau, grid_n, method)

    if verify:
        other = AmplitudeMethod.DDE if trace.method == AmplitudeMethod.SERIES else AmplitudeMethod.SERIES
        diff = max_disagreement(trace, compute_trace(frame, params.tau, grid_n, other))
        if diff > tolerance:
            raise VerificationError(diff, tolerance, params)
        if diff > tolerance / 2:
            logger.warning("Series/DDE disagreement %.3e is above half the tolerance", diff)
        else:
            logger.debug("Series/DDE disagreement %.3e", diff)
    return trace


def measure(
    params: PhysicalParams,
    metric: MetricName = MetricName.WIGNER_YANASE,
    grid_n: int = None,
    method: AmplitudeMethod = AmplitudeMethod.SERIES,
    verify: bool = False,
    real_coherence: bool = False,
    normalize: Optional[float] = None,
) -> MeasureReport:
    """
    Scalar measures for one parameter set.

    Module-level so sweep workers can pickle it.
    """
    started = time.perf_counter()
    trace = build_trace(params, grid_n, method, verify)
    if verify:
        verify_steady_population(trace.frame)

    v_a = average_speed(trace, params.beta, get_metric(metric), params.tau, real_coherence=real_coherence)
    if normalize:
        v_a /= normalize
    flow = flow_report(trace, params.tau)

    logger.debug("Measured %s in %.3fs", params.to_dict(), time.perf_counter() - started)
    return MeasureReport(
        params=params,
        average_speed=v_a,
        aleph=flow.aleph,
        aleph_total=flow.aleph_total,
        final_population=float(trace.population[-1]),
        steady_population=steady_population(trace.frame),
    )


def parameter_comments(run: RunConfig) -> list[str]:
    """Header comment lines echoing the full configuration and code version."""
    lines = [f"{config.APP_NAME} {config.APP_VERSION}"]
    lines += [f"{key}={value!r}" for key, value in run.params.to_dict().items()]
    lines.append(f"metric={run.metric.value}")
    lines.append(f"method={run.method.value}")
    lines.append(f"grid_n={run.grid_n}")
    if run.normalize:
        lines.append(f"normalize={run.normalize!r}")
    if run.real_coherence:
        lines.append("real_coherence=True")
    if run.sweep is not None:
        s = run.sweep
        lines.append(f"sweep={s.variable.value} from {s.start!r} to {s.stop!r} in {s.count} points")
    return lines


def run_trace(run: RunConfig) -> ResultTable:
    """
    Time-series table for a single parameter set.

    Columns are t followed by the groups selected in run.outputs, in the
    fixed order re_c, im_c, P, V, sigma, R.
    """
    if run.sweep is not None:
        raise ValueError("run_trace does not take a sweep; use run_sweep")
    logger.info("Trace run: %s", run.params.to_dict())

    trace = build_trace(run.params, run.grid_n, run.method, run.verify)
    data = {"t": trace.grid}
    if OutputKind.TRACE in run.outputs:
        data["re_c"] = trace.c.real
        data["im_c"] = trace.c.imag
        data["P"] = trace.population
    if OutputKind.SPEED in run.outputs:
        speeds = speed_series(trace, run.params.beta, get_metric(run.metric), run.real_coherence)
        data["V"] = speeds / run.normalize if run.normalize else speeds
    if OutputKind.FLOW in run.outputs:
        data["sigma"] = sigma_rate(trace)
        data["R"] = flow_rate(trace)

    columns = [c for kind in OutputKind for c in TRACE_COLUMNS[kind] if kind in run.outputs]
    return ResultTable(
        data=pd.DataFrame(data),
        x="t",
        y=columns,
        comments=parameter_comments(run),
        title="trace",
    )


def _sweep_point(args: tuple) -> MeasureReport:
    params, run = args
    try:
        return measure(
            params,
            metric=run.metric,
            grid_n=run.grid_n,
            method=run.method,
            verify=run.verify,
            real_coherence=run.real_coherence,
            normalize=run.normalize,
        )
    except Exception as e:
        raise SweepError(params, e) from e


def run_sweep(run: RunConfig) -> ResultTable:
    """
    Measure every point of the sweep and tabulate in ascending sweep order.

    Points run in a process pool when run.workers > 1; results are collected
    in submission order so the table does not depend on scheduling. The
    first failing point aborts the sweep.

    Raises:
        SweepError: wrapping the first failure, with its parameters
    """
    if run.sweep is None:
        raise ValueError("run_sweep needs a sweep definition")

    name = run.sweep.variable.value
    values = np.sort(run.sweep.values())
    points = [(replace(run.params, **{name: float(v)}), run) for v in values]
    workers = min(run.workers, len(points))
    logger.info("Sweep over %s: %d points, %d worker(s)", name, len(points), workers)

    started = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_sweep_point, points))
    else:
        reports = [_sweep_point(p) for p in points]
    logger.info("Sweep finished in %.2fs", time.perf_counter() - started)

    rows = []
    for value, report in zip(values, reports):
        row = report.to_dict()
        row.pop(name)
        rows.append({name: float(value), **row})

    return ResultTable(
        data=pd.DataFrame(rows),
        x=name,
        y=["V_a", "aleph", "aleph_total", "P_tau", "P_steady"],
        comments=parameter_comments(run),
        title=f"sweep over {name}",
    )
