"""Command-line surface: argument parsing, key=value config files and RunConfig assembly."""

import argparse
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import config
from models.schemas import (
    AmplitudeMethod,
    MetricName,
    OutputFormat,
    OutputKind,
    PhysicalParams,
    RunConfig,
    SweepSpec,
    SweepVariable,
)
from services.presets import PRESETS, Preset, get_preset
from utils.helpers import default_output_path

logger = logging.getLogger(__name__)

PARAM_KEYS = [f.name for f in fields(PhysicalParams)]
SWEEP_KEYS = ["variable", "start", "stop", "count"]

FLOAT_KEYS = set(PARAM_KEYS) | {"normalize", "start", "stop"}
INT_KEYS = {"grid_n", "workers", "count"}
BOOL_KEYS = {"verify", "real_coherence"}
TEXT_KEYS = {"metric", "format", "outputs", "method", "variable", "output", "log_level"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | BOOL_KEYS | TEXT_KEYS

BUILTIN_METRICS = [m.value for m in MetricName if m != MetricName.CUSTOM]


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ValueError (exit code 1)."""

    def error(self, message):
        raise ValueError(message)


@dataclass
class Invocation:
    """A parsed command line, ready to run."""
    command: str
    run: RunConfig
    output: Optional[Path]
    preset: Optional[Preset] = None
    overridden: frozenset = frozenset()
    log_level: str = config.LOG_LEVEL


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    physics = parser.add_argument_group("physical parameters (units of Gamma)")
    physics.add_argument("--gamma", type=float, help="spontaneous emission rate")
    physics.add_argument("--omega", type=float, help="classical driving strength, >= 0")
    physics.add_argument("--delta", type=float, help="detuning")
    physics.add_argument("--phi", type=float, help="mirror phase in radians")
    physics.add_argument("--t-delay", dest="t_delay", type=float, help="memory time")
    physics.add_argument("--beta", type=float, help="initial-state weight in [0, 1]")
    physics.add_argument("--tau", type=float, help="observation horizon")

    sweep = parser.add_argument_group("sweep")
    sweep.add_argument("--variable", choices=[v.value for v in SweepVariable], help="swept parameter")
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--count", type=int)

    run = parser.add_argument_group("run")
    run.add_argument("--metric", choices=BUILTIN_METRICS)
    run.add_argument("--grid-n", dest="grid_n", type=int, help="grid points per delay interval")
    run.add_argument("--method", choices=[m.value for m in AmplitudeMethod])
    run.add_argument("--verify", action="store_true", default=None, help="cross-check series against DDE")
    run.add_argument("--real-coherence", dest="real_coherence", action="store_true", default=None,
                     help="use |c| in the state coherence")
    run.add_argument("--normalize", type=float, help="divide V and V_a by this constant")
    run.add_argument("--outputs", help="comma list of trace,speed,flow")
    run.add_argument("--workers", type=int, help="sweep processes")

    out = parser.add_argument_group("output")
    out.add_argument("--output", help="output file (CSV defaults to stdout)")
    out.add_argument("--format", choices=[f.value for f in OutputFormat])
    out.add_argument("--config", type=Path, help="key=value file; flags override it")
    out.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog=config.APP_NAME,
        description="Delayed-feedback qubit simulator: amplitude, evolution speed and information flow.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    _add_common_flags(commands.add_parser("trace", help="time series for one parameter set"))
    _add_common_flags(commands.add_parser("sweep", help="scalar measures over a parameter sweep"))
    preset = commands.add_parser("preset", help="reproduce a figure")
    preset.add_argument("name", choices=sorted(PRESETS))
    _add_common_flags(preset)
    return parser


def _coerce(key: str, raw: str):
    if key in FLOAT_KEYS:
        return float(raw)
    if key in INT_KEYS:
        return int(raw)
    if key in BOOL_KEYS:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{key}={raw!r} is not a boolean")
    return raw.strip()


def load_config_file(path: Path) -> dict:
    """
    Read a key=value file.

    Blank lines and lines starting with '#' are skipped; keys may use '-' or
    '_' and must name a parameter or run option.

    Raises:
        ValueError: on a malformed line, unknown key or bad value
    """
    settings = {}
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KNOWN_KEYS:
            raise ValueError(f"{path}:{number}: unknown key '{key}'")
        settings[key] = _coerce(key, raw)
    logger.debug("Loaded %d settings from %s", len(settings), path)
    return settings


def _flag_settings(args: argparse.Namespace) -> dict:
    return {
        key: getattr(args, key)
        for key in KNOWN_KEYS
        if getattr(args, key, None) is not None
    }


def _parse_outputs(value) -> frozenset:
    if isinstance(value, frozenset):
        return value
    names = [part.strip() for part in str(value).split(",") if part.strip()]
    if not names:
        raise ValueError("outputs must name at least one of trace, speed, flow")
    return frozenset(OutputKind(name) for name in names)


def _sweep_from(settings: dict, fallback: Optional[SweepSpec]) -> Optional[SweepSpec]:
    given = [key for key in SWEEP_KEYS if key in settings]
    if not given:
        return fallback
    if fallback is not None:
        changes_variable = "variable" in given and settings["variable"] != fallback.variable.value
        if changes_variable and not ("start" in given and "stop" in given):
            raise ValueError(
                f"sweeping {settings['variable']} instead of {fallback.variable.value} needs --start and --stop"
            )
        base = {
            "variable": fallback.variable.value,
            "start": fallback.start,
            "stop": fallback.stop,
            "count": fallback.count,
        }
        settings = {**base, **{k: settings[k] for k in given}}
    missing = [key for key in SWEEP_KEYS if key not in settings]
    if missing:
        raise ValueError(f"sweep needs {', '.join('--' + k for k in missing)}")
    return SweepSpec(
        variable=SweepVariable(settings["variable"]),
        start=settings["start"],
        stop=settings["stop"],
        count=settings["count"],
    )


def build_invocation(args: argparse.Namespace) -> Invocation:
    """
    Merge defaults, preset, config file and flags into a RunConfig.

    Later sources win: built-in defaults, then the preset, then the
    --config file, then explicit flags.
    """
    preset = get_preset(args.name) if args.command == "preset" else None

    settings = {}
    if preset is not None:
        settings.update(preset.params)
        settings["outputs"] = preset.outputs
    explicit = {}
    if args.config is not None:
        explicit.update(load_config_file(args.config))
    explicit.update(_flag_settings(args))
    settings.update(explicit)

    params = PhysicalParams(**{k: settings[k] for k in PARAM_KEYS if k in settings})
    sweep = _sweep_from(settings, preset.sweep if preset is not None else None)
    if args.command == "sweep" and sweep is None:
        raise ValueError("sweep needs --variable, --start, --stop and --count")
    trace_mode = args.command == "trace" or (preset is not None and preset.mode == "trace")
    if trace_mode and sweep is not None:
        raise ValueError("trace runs do not take sweep options")

    run = RunConfig(
        params=params,
        sweep=sweep,
        metric=settings.get("metric", MetricName.WIGNER_YANASE),
        outputs=_parse_outputs(settings.get("outputs", frozenset(OutputKind))),
        format=settings.get("format", OutputFormat.CSV),
        normalize=settings.get("normalize"),
        grid_n=settings.get("grid_n", config.DEFAULT_GRID_N),
        verify=bool(settings.get("verify", False)),
        real_coherence=bool(settings.get("real_coherence", False)),
        method=settings.get("method", AmplitudeMethod.SERIES),
        workers=settings.get("workers", config.MAX_WORKERS if sweep is not None else 1),
    )

    output = settings.get("output")
    if output is not None:
        output = Path(output)
    elif run.format == OutputFormat.SVG:
        stem = preset.name if preset is not None else args.command
        output = default_output_path(stem, "svg")

    return Invocation(
        command=args.command,
        run=run,
        output=output,
        preset=preset,
        overridden=frozenset(k for k in explicit if k in PARAM_KEYS),
        log_level=settings.get("log_level") or config.LOG_LEVEL,
    )
