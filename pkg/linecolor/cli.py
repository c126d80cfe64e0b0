"""
Command-line entry point: exact searches, periodic colorings, the constructive
colorer, lower-bound witnesses and the experiment harness.
"""


import argparse
import enum
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Set

import yaml

from linecolor import experiments
from linecolor.bounds import (
    KDistanceSet,
    confirm_by_search,
    hypersimplex_set,
    line_set,
    lower_bound_binomial,
    pigeonhole_certificate,
    polygon_set,
    witness_from_kdistance,
)
from linecolor.constructive import (
    ResampleFailure,
    bound_sequence,
    closed_form_bound,
    color_line,
    dependency_degree,
    lll_diagnostics,
)
from linecolor.experiments import Event, log_event
from linecolor.formats import (
    SchemaError,
    array_from_json,
    array_to_json,
    coloring_from_json,
    coloring_to_json,
    instance_from_json,
    load,
    points_from_json,
    save,
)
from linecolor.lib import SETTINGS_PATH, format_rational, logger
from linecolor.model import (
    Coloring,
    MalformedColoringError,
    PointSet,
    RestrictionArray,
    SoundnessError,
    Violation,
    verify_coloring,
)
from linecolor.periodic import find_periodic, restrict_periodic, verify_periodic
from linecolor.settings import Settings
from linecolor.solver import BudgetExceededError, Status, decide_finite, find_unsat_window


class ExitCode(enum.Enum):
    SUCCESS = 0
    NOT_FOUND = 1
    BUDGET = 2
    INPUT_ERROR = 3


# logging

logger.setLevel(logging.WARN)
logger.propagate = False
LOGFILE_FORMATTER = logging.Formatter(
    "{asctime:s} | {levelname:.1s}:{name:s}: {message:s}", style="{"
)
LOGFILES: Set[str] = set()


# log any uncaught exceptions
def handle_exception(exc_type, exc_value, exc_traceback):
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return

    logger.critical("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))


DESC = """
Colors points of the line so that no two points of color j are at a distance
listed in column j of a restriction array, or shows that it cannot be done.
"""
EPILOG = """
Instances, arrays, point sets and colorings are JSON files with a top-level
"format": 1 field. Rationals are written as strings ("3/2"). Search limits
come from the settings file unless overridden on the command line; run with
"-h config" for more information.

Exit codes: 0 success, 1 UNSAT or nothing found, 2 budget exhausted,
3 invalid input.

Examples:
  %(prog)s solve --instance test/instances/staircase2.json
  %(prog)s window --array test/instances/onetwo.json --radius 5
  %(prog)s experiment chi2z --entry-max 4 --radius 8 --out chi2z.json
"""
CONFIG_HELP = f"""
Settings file:
A YAML mapping read from $LINECOLOR_SETTINGS, or {SETTINGS_PATH} if that is
not set, or the file given with -c/--config. Every key is optional.

seed:        Root seed for the randomized colorer (non-negative, default 0)
node_budget: Search nodes allowed per exact decision (default 10000000)
round_cap:   Resampling rounds before falling back to exact search (default 100000)
radius:      Largest symmetric window [-r, r] tried by window searches (default 10)
p_max:       Largest period tried by periodic searches (default 30)
entry_max:   Largest array entry enumerated by experiments (default 4)
jobs:        Worker processes used by experiments (default 1)
journal:     Append START/STOP lines to <report>.journal next to experiment
             reports (default true)
"""


def setup_logfile(logfile: Any) -> None:
    """
    Adds a log file to the logger.
    """
    logpath = Path(logfile).resolve(strict=False)
    if str(logpath) not in LOGFILES:
        handler = logging.FileHandler(logpath, mode="w")
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(LOGFILE_FORMATTER)
        logger.addHandler(handler)
        LOGFILES.add(str(logpath))


def _common_parser(suppress: bool = False) -> argparse.ArgumentParser:
    """Flags accepted before or after any subcommand.

    Subcommand copies use SUPPRESS defaults so that they do not overwrite a
    flag given before the subcommand.
    """
    unset = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("common options")
    group.add_argument(
        "-c", "--config", metavar="FILE", default=unset, help="read settings from FILE"
    )
    group.add_argument(
        "-d", "--debug", help="enable debugging output", action="store_true", default=unset
    )
    group.add_argument(
        "-v",
        "--verbose",
        help="enable informational output",
        action="store_true",
        default=unset,
    )
    group.add_argument(
        "-o",
        "--output",
        metavar="FILE",
        help="log all output to a file (will overwrite, not append)",
        dest="logfile",
        default=unset,
    )
    group.add_argument(
        "--out", metavar="FILE", default=unset, help="also write the result to FILE"
    )
    group.add_argument("--seed", type=int, default=unset, help="root seed for randomized steps")
    group.add_argument(
        "--budget", type=int, dest="node_budget", default=unset, help="search node budget"
    )
    group.add_argument("--round-cap", type=int, default=unset, help="resampling round cap")
    group.add_argument("--radius", type=int, default=unset, help="largest window radius to try")
    group.add_argument(
        "--pmax", type=int, dest="p_max", default=unset, help="largest period to try"
    )
    group.add_argument(
        "--entry-max", type=int, default=unset, help="largest array entry to enumerate"
    )
    group.add_argument(
        "-j", "--jobs", type=int, default=unset, help="worker processes for experiments"
    )
    group.add_argument(
        "--progress",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="show progress bars",
    )
    return common


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    sub_common = _common_parser(suppress=True)
    parser = argparse.ArgumentParser(
        prog="colorer",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        add_help=False,
        description=DESC,
        epilog=EPILOG,
        parents=[_common_parser()],
    )
    parser.add_argument(
        "-h", "--help", help="show this help message and exit", nargs="?", const="help"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, help=help_text, description=help_text, parents=[sub_common]
        )

    p = add("solve", "decide whether a finite instance is colorable")
    p.add_argument("--instance", required=True, metavar="FILE")

    p = add("window", "search for an integer window that cannot be colored")
    p.add_argument("--array", required=True, metavar="FILE")

    p = add("periodic", "search for a periodic coloring of the integers")
    p.add_argument("--array", required=True, metavar="FILE")
    p.add_argument(
        "--window",
        nargs=2,
        type=int,
        metavar=("A", "B"),
        help="also write the coloring restricted to [A, B]",
    )

    p = add("color", "color a finite set of rationals with the constructive colorer")
    p.add_argument("--array", required=True, metavar="FILE")
    p.add_argument("--points", required=True, metavar="FILE")

    p = add("bounds", "print the column bounds B_0..B_k")
    p.add_argument("--k", type=int, required=True)

    p = add("diagnose", "local lemma parameters of an array")
    p.add_argument("--array", required=True, metavar="FILE")
    p.add_argument(
        "--points", metavar="FILE", help="also measure the dependency degree on these points"
    )

    p = add("lowerbound", "the k-distance set lower bound C(n+1, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("kdistance", "build a k-distance set")
    p.add_argument("kind", choices=["hypersimplex", "polygon"])
    p.add_argument("--n", type=int, default=None, help="dimension (hypersimplex only)")
    p.add_argument("--k", type=int, required=True)

    p = add("witness", "the array a point set cannot be colored with")
    p.add_argument("--points", required=True, metavar="FILE")

    p = add("verify", "check a coloring against an instance")
    p.add_argument("--instance", required=True, metavar="FILE")
    p.add_argument("--coloring", required=True, metavar="FILE")

    p = add("experiment", "run an experiment and write its report")
    exp_sub = p.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    exp_sub.required = True
    experiments.register_experiments()
    for name, exp_cls in sorted(experiments.get_all_experiments().items()):
        exp = exp_cls()
        exp_parser = exp_sub.add_parser(
            name, help=exp.help, description=exp.help, parents=[sub_common]
        )
        exp.add_arguments(exp_parser)

    args = parser.parse_args(argv)

    if args.help == "config":
        print(CONFIG_HELP)
        sys.exit(0)
    elif args.help is not None:
        parser.print_help()
        sys.exit(0)

    if args.command is None:
        parser.error("a command is required")

    return args


def get_settings(args: argparse.Namespace) -> Settings:
    """
    Constructs the run settings from the given arguments.
    """
    # order of precedence, from highest to lowest:
    #  1. command line flags
    #  2. settings file (--config, $LINECOLOR_SETTINGS or the default path)
    #  3. built-in defaults
    settings = Settings.load(args.config)
    for name in ("seed", "node_budget", "round_cap", "radius", "p_max", "entry_max", "jobs"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(settings, name, val)
    return settings


def _emit(data: Dict[str, Any], args: argparse.Namespace) -> None:
    print(save(data, args.out), end="")


def _violations_to_json(violations: List[Violation]) -> List[Dict[str, Any]]:
    return [
        {
            "x": format_rational(v.x),
            "y": format_rational(v.y),
            "color": v.color,
            "distance": format_rational(v.distance),
            "row": v.row,
        }
        for v in violations
    ]


def _checked(S: PointSet, T: Coloring, D: RestrictionArray) -> Coloring:
    """Re-verifies a coloring right before it is written."""
    violations = verify_coloring(S, T, D)
    if violations:
        logger.critical("refusing to write a coloring with %d violations", len(violations))
        raise SoundnessError(f"coloring violates {violations[0]}")
    return T


def cmd_solve(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D, S = instance_from_json(load(args.instance))
    result = decide_finite(S, D, settings.node_budget)
    logger.info("%s after %d nodes", result.status.name, result.stats.nodes)
    if result.witness is None:
        print("UNSAT")
        return ExitCode.NOT_FOUND
    _emit(coloring_to_json(_checked(S, result.witness, D)), args)
    return ExitCode.SUCCESS


def cmd_window(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D = array_from_json(load(args.array))
    report = find_unsat_window(D, settings.radius, settings.node_budget)
    if report.window is None:
        print("none")
        return ExitCode.NOT_FOUND
    _emit(
        {
            "format": 1,
            "array": array_to_json(D),
            "window": list(report.window),
            "radius": report.radius,
        },
        args,
    )
    return ExitCode.SUCCESS


def cmd_periodic(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D = array_from_json(load(args.array))
    P = find_periodic(D, settings.p_max, settings.node_budget)
    if P is None:
        print("none")
        return ExitCode.NOT_FOUND
    if verify_periodic(P, D):
        raise SoundnessError(f"period-{P.period} coloring fails verification")
    data: Dict[str, Any] = {"format": 1, "period": P.period, "colors": list(P.colors)}
    if args.window is not None:
        a, b = args.window
        if a > b:
            raise ValueError(f"empty window [{a}, {b}]")
        S, T = restrict_periodic(P, a, b)
        data["window"] = coloring_to_json(_checked(S, T, D))["colors"]
    _emit(data, args)
    return ExitCode.SUCCESS


def cmd_color(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D = array_from_json(load(args.array))
    Q = points_from_json(load(args.points))
    result = color_line(D, Q, settings.seed, settings.round_cap, settings.node_budget)
    trace = [
        {
            "depth": step.depth,
            "branch": step.branch.value,
            "k": step.k,
            "m": step.m,
            "rho": step.rho,
            "points": step.points,
            "r": format_rational(step.r) if step.r is not None else None,
            "classes": step.classes,
            "rounds": step.rounds,
            "fallback": step.fallback,
        }
        for step in result.trace
    ]
    if result.coloring is None:
        print("UNSAT")
        return ExitCode.NOT_FOUND
    data = coloring_to_json(_checked(Q, result.coloring, D))
    data["seed"] = settings.seed
    data["trace"] = trace
    _emit(data, args)
    return ExitCode.SUCCESS


def cmd_bounds(args: argparse.Namespace, settings: Settings) -> ExitCode:
    bounds = bound_sequence(args.k)
    _emit(
        {"format": 1, "bounds": list(bounds.values), "closed_form": closed_form_bound(args.k)},
        args,
    )
    return ExitCode.SUCCESS


def cmd_diagnose(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D = array_from_json(load(args.array))
    diag = lll_diagnostics(D)
    data: Dict[str, Any] = {
        "format": 1,
        "k": diag.k,
        "m": diag.m,
        "rho": diag.rho,
        "p": format_rational(diag.p),
        "delta_bound": diag.delta_bound,
        "product": format_rational(diag.product),
        "strict": diag.strict,
        "guarantee": diag.guarantee,
    }
    if args.points is not None:
        data["dependency_degree"] = dependency_degree(points_from_json(load(args.points)), D)
    _emit(data, args)
    return ExitCode.SUCCESS


def cmd_lowerbound(args: argparse.Namespace, settings: Settings) -> ExitCode:
    bound = lower_bound_binomial(args.n, args.k)
    _emit({"format": 1, "n": args.n, "k": args.k, "bound": bound}, args)
    return ExitCode.SUCCESS


def cmd_kdistance(args: argparse.Namespace, settings: Settings) -> ExitCode:
    if args.kind == "hypersimplex":
        if args.n is None:
            raise ValueError("hypersimplex needs --n")
        S = hypersimplex_set(args.n, args.k)
    else:
        S = polygon_set(args.k)
    logger.info("%s set with %d points in dimension %d", args.kind, len(S), S.dimension)
    _emit(S.to_json(), args)
    return ExitCode.SUCCESS


def cmd_witness(args: argparse.Namespace, settings: Settings) -> ExitCode:
    data = load(args.points)
    if "dimension" in data:
        S = KDistanceSet.from_json(data)
    else:
        S = line_set(list(points_from_json(data)))
    W = witness_from_kdistance(S)
    if not pigeonhole_certificate(W):
        raise SoundnessError(f"no pigeonhole certificate for {W.array}")
    searched: Optional[str] = None
    if S.dimension == 1:
        confirm_by_search(W, settings.node_budget)
        searched = Status.UNSAT.name
    _emit(
        {
            "format": 1,
            "points": len(S),
            "array": array_to_json(W.array),
            "squared": W.squared,
            "claim": W.claim,
            "certificate": True,
            "search": searched,
        },
        args,
    )
    return ExitCode.SUCCESS


def cmd_verify(args: argparse.Namespace, settings: Settings) -> ExitCode:
    D, S = instance_from_json(load(args.instance))
    T = coloring_from_json(load(args.coloring))
    violations = verify_coloring(S, T, D)
    print(save({"format": 1, "violations": _violations_to_json(violations)}, None), end="")
    return ExitCode.NOT_FOUND if violations else ExitCode.SUCCESS


def cmd_experiment(args: argparse.Namespace, settings: Settings) -> ExitCode:
    exp = experiments.get_all_experiments()[args.experiment]()
    journal = None
    if args.out is not None and settings.journal:
        journal = Path(args.out).with_suffix(".journal")
    log_event(journal, args.experiment, Event.START)
    try:
        result = exp.run(args, settings)
    except Exception:
        log_event(journal, args.experiment, Event.FAIL)
        raise
    log_event(journal, args.experiment, Event.STOP)
    _emit(result.report, args)
    return ExitCode.SUCCESS if result.ok else ExitCode.NOT_FOUND


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], ExitCode]] = {
    "solve": cmd_solve,
    "window": cmd_window,
    "periodic": cmd_periodic,
    "color": cmd_color,
    "bounds": cmd_bounds,
    "diagnose": cmd_diagnose,
    "lowerbound": cmd_lowerbound,
    "kdistance": cmd_kdistance,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def dispatch(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Runs one subcommand and maps expected failures to exit codes.

    SoundnessError is not caught.
    """
    try:
        return COMMANDS[args.command](args, settings)
    except BudgetExceededError as ex:
        logger.warning("%s", ex)
        return ExitCode.BUDGET
    except ResampleFailure as ex:
        logger.warning("%s", ex)
        if ex.fallback is not None and ex.fallback.status is Status.UNSAT:
            return ExitCode.NOT_FOUND
        return ExitCode.BUDGET
    except SoundnessError:
        raise
    except (SchemaError, MalformedColoringError, ValueError, TypeError) as ex:
        logger.error("%s", ex)
        return ExitCode.INPUT_ERROR
    except OSError as ex:
        logger.error("%s: %s", ex.filename or "I/O error", ex.strerror or ex)
        return ExitCode.INPUT_ERROR


def main(argv: Optional[List[str]] = None) -> ExitCode:
    args = parse_args(argv)

    # setup logging
    if args.debug:
        logger.setLevel(logging.DEBUG)
    elif args.verbose:
        logger.setLevel(logging.INFO)

    if args.logfile is not None:
        setup_logfile(args.logfile)

    try:
        settings = get_settings(args)
    except (OSError, TypeError, yaml.YAMLError) as ex:
        logger.error("could not load settings: %s", ex)
        return ExitCode.INPUT_ERROR

    settings_err_msg = settings.check()
    if settings_err_msg is not None:
        logger.error(settings_err_msg)
        return ExitCode.INPUT_ERROR
    logger.debug("settings:\n%s", settings.pretty())

    return dispatch(args, settings)


def run() -> NoReturn:
    # create console log handler and set level to debug, as the actual level
    # selection is done in the logger
    ch = logging.StreamHandler()
    ch.setLevel(logging.DEBUG)
    ch.setFormatter(logging.Formatter("{levelname:.1s}:{name}: {message}", style="{"))
    logger.addHandler(ch)
    sys.excepthook = handle_exception

    sys.exit(main().value)
