"""Figure presets: fixed parameter sets with one curve per family member."""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import pandas as pd

from models.schemas import OutputKind, ResultTable, RunConfig, SweepSpec, SweepVariable
from services.experiment import measure, parameter_comments, run_sweep, run_trace

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2.0

# Shared by every figure: Gamma tau = 10, beta = 1, Delta = 0
FIGURE_BASE = {"gamma": 1.0, "delta": 0.0, "beta": 1.0, "tau": 10.0}


@dataclass(frozen=True)
class Preset:
    """A reproducible figure configuration."""
    name: str
    title: str
    mode: str  # "trace" or "sweep"
    params: dict
    family: list = field(default_factory=lambda: [{}])
    sweep: Optional[SweepSpec] = None
    outputs: frozenset = frozenset(OutputKind)
    notes: list = field(default_factory=list)
    speed_ratio: bool = False


PRESETS = {
    "fig2": Preset(
        name="fig2",
        title="Average speed vs mirror phase",
        mode="sweep",
        params={**FIGURE_BASE, "omega": 0.0},
        family=[{"t_delay": 0.2}, {"t_delay": 2.0}, {"t_delay": 20.0}],
        sweep=SweepSpec(SweepVariable.PHI, 0.0, 2 * math.pi, 65),
        notes=["t_delay=20 stands in for the very large memory time (t_delay >= tau, feedback never acts)"],
    ),
    "fig3": Preset(
        name="fig3",
        title="Average speed vs driving strength",
        mode="sweep",
        params={**FIGURE_BASE},
        family=[
            {"t_delay": t_delay, "phi": phi}
            for t_delay in (0.2, 2.0)
            for phi in (0.0, HALF_PI)
        ],
        sweep=SweepSpec(SweepVariable.OMEGA, 0.1, 1.9, 10),
        notes=[
            "panel a is t_delay=0.2, panel b is t_delay=2",
            "phi values 0 and pi/2 chosen as representative legend entries",
            "omega starts above 0; the undriven qubit is a separate frame branch",
        ],
    ),
    "fig4": Preset(
        name="fig4",
        title="Excited population with and without the bound state",
        mode="trace",
        params={**FIGURE_BASE, "omega": 0.0, "t_delay": 2.0, "tau": 50.0},
        family=[{"phi": 0.0}, {"phi": HALF_PI}],
        outputs=frozenset({OutputKind.TRACE}),
        notes=["tau extended to 50 to show the trapping plateau 1/(1 + A t_delay)^2"],
    ),
    "fig5": Preset(
        name="fig5",
        title="Average speed and non-Markovianity vs mirror phase",
        mode="sweep",
        params={**FIGURE_BASE, "omega": 0.0, "t_delay": 2.0},
        sweep=SweepSpec(SweepVariable.PHI, 0.0, 2 * math.pi, 65),
        speed_ratio=True,
    ),
    "fig6": Preset(
        name="fig6",
        title="Instantaneous speed and information flow rate",
        mode="trace",
        params={**FIGURE_BASE, "omega": 0.0, "t_delay": 2.0},
        family=[{"phi": 0.0}, {"phi": HALF_PI}],
        outputs=frozenset({OutputKind.SPEED, OutputKind.FLOW}),
        notes=["panel a is phi=0, panel b is phi=pi/2"],
    ),
    "fig7": Preset(
        name="fig7",
        title="Total information flow vs driving strength",
        mode="sweep",
        params={**FIGURE_BASE, "phi": 0.0},
        family=[{"t_delay": 0.2}, {"t_delay": 2.0}],
        sweep=SweepSpec(SweepVariable.OMEGA, 0.1, 0.1 + 2 * math.pi, 161),
        notes=["phi=0 held fixed", "omega step pi/80 so the period pi/t_delay is a whole number of steps"],
    ),
}


def get_preset(name: str) -> Preset:
    if name not in PRESETS:
        raise ValueError(f"unknown preset '{name}'; choose from {', '.join(sorted(PRESETS))}")
    return PRESETS[name]


def curve_members(preset: Preset, overridden: set[str]) -> list[dict]:
    """Family members left after explicit overrides pin some of their keys."""
    members = []
    for member in preset.family:
        kept = {k: v for k, v in member.items() if k not in overridden}
        if kept not in members:
            members.append(kept)
    return members


def curve_label(member: dict) -> str:
    if not member:
        return "default"
    return ", ".join(f"{key}={value:.6g}" for key, value in member.items())


def run_preset(preset: Preset, run: RunConfig, overridden: set[str] = frozenset()) -> ResultTable:
    """
    Run every curve of a preset and stack the results in long format.

    run carries the preset parameters already merged with any overrides;
    keys in overridden are removed from the family so a pinned value yields
    a single curve.

    Returns:
        ResultTable with a 'curve' group column
    """
    frames = []
    table = None
    sweep = (run.sweep or preset.sweep) if preset.mode == "sweep" else None
    pinned = set(overridden)
    if sweep is not None:
        # the sweep overwrites its own variable in every member
        pinned.add(sweep.variable.value)
    members = curve_members(preset, pinned)
    logger.info("Preset %s: %d curve(s)", preset.name, len(members))

    for member in members:
        member_run = replace(run, params=replace(run.params, **member), sweep=sweep)
        if sweep is not None:
            table = run_sweep(member_run)
        else:
            table = run_trace(member_run)
        data = table.data.copy()
        data.insert(0, "curve", curve_label(member))
        frames.append(data)

    comments = [f"preset {preset.name}: {preset.title}"] + [f"note: {n}" for n in preset.notes]
    comments += parameter_comments(replace(run, sweep=sweep))
    if preset.speed_ratio:
        comments.append(speed_ratio_comment(run))

    return ResultTable(
        data=pd.concat(frames, ignore_index=True),
        x=table.x,
        y=table.y,
        group="curve",
        comments=comments,
        title=preset.title,
    )


def speed_ratio_comment(run: RunConfig) -> str:
    """V_a(pi/2) / V_a(0) at the run's other parameters."""
    speeds = {}
    for phi in (HALF_PI, 0.0):
        report = measure(
            replace(run.params, phi=phi),
            metric=run.metric,
            grid_n=run.grid_n,
            method=run.method,
            real_coherence=run.real_coherence,
        )
        speeds[phi] = report.average_speed
    ratio = speeds[HALF_PI] / speeds[0.0]
    logger.info("V_a(pi/2)=%.6g, V_a(0)=%.6g, ratio %.6g", speeds[HALF_PI], speeds[0.0], ratio)
    return f"V_a(pi/2)={speeds[HALF_PI]!r} V_a(0)={speeds[0.0]!r} ratio={ratio!r}"
