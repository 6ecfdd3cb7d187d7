"""Data models package."""

from .schemas import (
    AmplitudeMethod,
    AmplitudeTrace,
    DressedFrame,
    FlowReport,
    MCFunction,
    MeasureReport,
    MetricName,
    OutputFormat,
    OutputKind,
    PhysicalParams,
    QubitState,
    ResultTable,
    RunConfig,
    SpectralDecomp,
    SweepSpec,
    SweepVariable,
)

__all__ = [
    "AmplitudeMethod",
    "AmplitudeTrace",
    "DressedFrame",
    "FlowReport",
    "MCFunction",
    "MeasureReport",
    "MetricName",
    "OutputFormat",
    "OutputKind",
    "PhysicalParams",
    "QubitState",
    "ResultTable",
    "RunConfig",
    "SpectralDecomp",
    "SweepSpec",
    "SweepVariable",
]
