"""
Command-line front end: simulate, figure, verify and revivals subcommands
"""

import argparse
import logging
import sys

from .errors import ExitCode, RamanscopeError, TruncationError, VerificationError
from .presets import PRESETS, get_preset
from .revivals import DEFAULT_WINDOW, detect_revivals
from .runner import DEFAULT_TOLERANCE, run_scenario, verify
from .scenario import MODELS, Scenario, load_config, scenario_fields
from .timeseries import read_csv, write_csv

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# flag destinations that map one-to-one onto Scenario fields
SCENARIO_FLAGS = ("model", "mode1", "mode2", "r", "delta_over_g1", "observables", "tau_max",
                  "steps", "epsilon", "n1_max", "n2_max", "stark_shifts")


def configure_logging(verbosity: int = 0):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _observables(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _scenario_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("scenario")
    group.add_argument("--preset", choices=sorted(PRESETS), help="Start from a figure preset")
    group.add_argument("--config", help="key=value scenario file (flags override its values)")
    group.add_argument("--model", choices=MODELS)
    group.add_argument("--mode1", help="Mode-1 preparation: fock:N, coherent:nbar or thermal:nbar")
    group.add_argument("--mode2", help="Mode-2 preparation (quantum model only)")
    group.add_argument("--r", type=float, help="g2/g1, or r' for the semiclassical model")
    group.add_argument("--delta-over-g1", type=float, help="Detuning in units of g1")
    group.add_argument("--observables", type=_observables,
                       help="Comma-separated subset of inversion,negativity,linear-entropy")
    group.add_argument("--tau-max", type=float, help="End of the scaled-time grid")
    group.add_argument("--steps", type=int, help="Number of grid points")
    group.add_argument("--epsilon", type=float, help="Truncation tolerance of the field distributions")
    group.add_argument("--stark-shifts", action=argparse.BooleanOptionalAction, default=None,
                       help="Keep the intensity-dependent shift terms (default: on)")
    group.add_argument("--workers", type=int, default=1, help="Threads used to evaluate the grid")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramanscope",
        description="Collapse, revival and entanglement dynamics of the Raman coupled model")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress messages, -vv for debug detail")
    commands = parser.add_subparsers(dest="command", required=True)
    parent = _scenario_parent()

    simulate = commands.add_parser("simulate", parents=[parent], help="Evaluate a scenario and write CSV")
    simulate.add_argument("--out", default="simulation.csv", help="Output CSV path")

    figure = commands.add_parser("figure", help="Write the CSV of a figure preset")
    figure.add_argument("name", choices=sorted(PRESETS))
    figure.add_argument("--out", help="Output CSV path (default: <name>.csv)")
    figure.add_argument("--steps", type=int)
    figure.add_argument("--tau-max", type=float)
    figure.add_argument("--workers", type=int, default=1)

    check = commands.add_parser("verify", parents=[parent], help="Compare closed forms with the oracle")
    check.add_argument("--n1-max", type=int, help="Mode-1 cutoff of the oracle")
    check.add_argument("--n2-max", type=int, help="Mode-2 cutoff of the oracle")
    check.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)

    revivals = commands.add_parser("revivals", help="Print revival times found in a CSV column")
    revivals.add_argument("input", help="CSV written by simulate or figure")
    revivals.add_argument("--column", default="inversion")
    revivals.add_argument("--window", type=int, default=DEFAULT_WINDOW,
                          help="Half-width of the envelope window, in samples")
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    """Layer preset, config file and flags (later wins) into one Scenario"""
    values = {}
    if getattr(args, "preset", None):
        base = get_preset(args.preset)
        values.update({name: getattr(base, name) for name in SCENARIO_FLAGS + ("name", "note")})
    if getattr(args, "config", None):
        values.update(scenario_fields(load_config(args.config)))
    for name in SCENARIO_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return Scenario(**values)


def _simulate(args) -> ExitCode:
    scenario = scenario_from_args(args)
    series = run_scenario(scenario, args.workers)
    path = write_csv(series, args.out)
    print(f"Saved {len(series)} rows of {', '.join(series.names)} to {path}")
    return ExitCode.OK


def _figure(args) -> ExitCode:
    scenario = get_preset(args.name).with_overrides(steps=args.steps, tau_max=args.tau_max)
    series = run_scenario(scenario, args.workers)
    path = write_csv(series, args.out or f"{args.name}.csv")
    print(f"Saved {args.name} ({len(series)} rows) to {path}")
    return ExitCode.OK


def _verify(args) -> ExitCode:
    scenario = scenario_from_args(args)
    report = verify(scenario, args.n1_max, args.n2_max, args.tolerance, args.workers)
    for line in report.lines():
        print(line)
    report.raise_for_failure()
    return ExitCode.OK


def _revivals(args) -> ExitCode:
    series = read_csv(args.input)
    peaks = detect_revivals(series.column(args.column), series.tau, args.window)
    if not peaks:
        print("No revivals found")
    for time in peaks:
        print(f"{time:.6f}")
    return ExitCode.OK


HANDLERS = {
    "simulate": _simulate,
    "figure": _figure,
    "verify": _verify,
    "revivals": _revivals,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return int(HANDLERS[args.command](args))
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.TRUNCATION_FAILED)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.VERIFICATION_FAILED)
    except (RamanscopeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.INVALID_SCENARIO)
