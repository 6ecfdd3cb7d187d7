"""
simulate - delayed-feedback qubit simulator

Command-line entry point for:
- Amplitude traces of a driven qubit in front of a mirror
- Monotone-metric evolution speed
- Trace-distance information flow
- Figure presets and parameter sweeps

Exit codes: 0 success, 1 invalid input, 2 verification failure.
"""

import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

import config  # noqa: E402
from components.cli import Invocation, build_invocation, build_parser  # noqa: E402
from components.output import emit_svg, write_csv  # noqa: E402
from models.schemas import OutputFormat, ResultTable  # noqa: E402
from services.experiment import SweepError, VerificationError, run_sweep, run_trace  # noqa: E402
from services.presets import run_preset  # noqa: E402

logger = logging.getLogger(config.APP_NAME)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2


def configure_logging(level: str) -> None:
    """Log to stderr so CSV on stdout stays clean."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def execute(invocation: Invocation) -> ResultTable:
    """Run the command described by an invocation."""
    run = invocation.run
    if invocation.preset is not None:
        return run_preset(invocation.preset, run, invocation.overridden)
    if invocation.command == "sweep":
        return run_sweep(run)
    return run_trace(run)


def emit(table: ResultTable, invocation: Invocation) -> None:
    if invocation.run.format == OutputFormat.SVG:
        emit_svg(table, invocation.output)
    else:
        write_csv(table, invocation.output)


def main(argv: list[str] = None) -> int:
    """
    Parse arguments, run, and write results.

    Args:
        argv: Argument list without the program name (default sys.argv[1:])

    Returns:
        Process exit code
    """
    configure_logging(config.LOG_LEVEL)
    try:
        args = build_parser().parse_args(argv)
        invocation = build_invocation(args)
        configure_logging(invocation.log_level)
        table = execute(invocation)
        emit(table, invocation)
    except VerificationError as e:
        logger.error("Verification failed: %s", e)
        return EXIT_VERIFY
    except SweepError as e:
        logger.error("%s", e)
        return EXIT_VERIFY if e.is_verification_failure else EXIT_INVALID
    except (ValueError, OSError) as e:
        logger.error("Invalid input: %s", e)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
