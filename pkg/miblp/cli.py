"""Command-line interface: solve, validate, gen and profile subcommands.

   Functions:
       build_parser
       params_from_args
       cmd_solve
       cmd_validate
       cmd_gen
       cmd_profile
       main
"""

__all__ = ["build_parser", "params_from_args", "cmd_solve", "cmd_validate", "cmd_gen", "cmd_profile", "main"]

import argparse
import logging
import sys
import warnings

from . import BilevelSolver
from .enums import BranchStrategy, CutStrategy, SearchStrategy
from .exceptions import MiblpException, MiblpWarning
from .fileio import read_instance, write_solution
from .generator import generate_files, profile_from_name
from .model import validate
from .params import DEFAULT_PRESET, PRESETS, SolverParams
from .profile import performance_profile, run_profile, write_csv

logger = logging.getLogger(__name__)

# flag name -> SolverParams field, for the on/off parameters
BOOLEAN_FLAGS = {
    "useLinkingSolutionPool": "use_linking_pool",
    "solveSecondLevelWhenLVarsFixed": "solve_second_level_when_l_vars_fixed",
    "solveSecondLevelWhenLVarsInt": "solve_second_level_when_l_vars_int",
    "solveSecondLevelWhenXVarsInt": "solve_second_level_when_x_vars_int",
    "solveSecondLevelWhenXYVarsInt": "solve_second_level_when_xy_vars_int",
    "computeBestUBWhenLVarsFixed": "compute_best_ub_when_l_vars_fixed",
    "computeBestUBWhenLVarsInt": "compute_best_ub_when_l_vars_int",
    "computeBestUBWhenXVarsInt": "compute_best_ub_when_x_vars_int",
    "improvingObjectiveCutHeuristic": "improving_objective_cut_heuristic",
    "secondLevelPriorityHeuristic": "second_level_priority_heuristic",
    "weightedSumsHeuristic": "weighted_sums_heuristic",
    "strongBranching": "strong_branching",
}

CUT_NAMES = {
    "auto": CutStrategy.Auto,
    "integer_no_good": CutStrategy.IntegerNoGood,
    "generalized_no_good": CutStrategy.GeneralizedNoGood,
    "hypercube_ic": CutStrategy.HypercubeIC,
    "none": CutStrategy.Disabled,
}

SEARCH_NAMES = {"best_first": SearchStrategy.BestFirst, "depth_first": SearchStrategy.DepthFirst}


def _boolean(text:str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError("expected true or false, got {}".format(text))


def _weights(text:str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated numbers, got {}".format(text))


def _add_solver_flags(parser:argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver parameters")
    group.add_argument("--strategy", default=DEFAULT_PRESET,
                       help="named solve strategy, one of {} (default %(default)s)".format(", ".join(PRESETS)))
    group.add_argument("--branchStrategy", choices=[s.name.lower() for s in BranchStrategy],
                       help="linking or fractional (default: linking when r1 <= r2)")
    for flag, field in BOOLEAN_FLAGS.items():
        group.add_argument("--" + flag, dest=field, type=_boolean, nargs="?", const=True, default=None,
                           metavar="BOOL", help="true or false (bare flag means true)")
    group.add_argument("--cutStrategy", choices=list(CUT_NAMES))
    group.add_argument("--heuristicFrequency", type=int)
    group.add_argument("--weights", type=_weights, help="weighted-sums schedule, e.g. 0.9,0.5,0.1")
    group.add_argument("--search", choices=list(SEARCH_NAMES))
    group.add_argument("--timeLimit", type=float, help="seconds")
    group.add_argument("--nodeLimit", type=int)
    group.add_argument("--maxCutRounds", type=int)
    group.add_argument("--milpNodeLimit", type=int, help="node cap of subsolver MILPs")
    group.add_argument("--feasCheckSolver", default="internal", help="feasibility check subsolver (only 'internal')")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="miblp", description="Branch and cut for mixed integer bilevel linear programs")
    parser.add_argument("--logLevel", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve an instance")
    solve.add_argument("mps", help="MPS file")
    solve.add_argument("aux", help="auxiliary information file")
    solve.add_argument("--output", help="solution file to write")
    solve.add_argument("--constantRhs", action="store_true",
                       help="move constant second-level right-hand sides into a fixed first-level column")
    _add_solver_flags(solve)

    check = commands.add_parser("validate", help="check an instance against the standing assumptions")
    check.add_argument("mps")
    check.add_argument("aux")
    check.add_argument("--constantRhs", action="store_true")

    gen = commands.add_parser("gen", help="write a random instance")
    gen.add_argument("profile", help="iblp-den, miblp-xu or interdiction")
    gen.add_argument("size", type=int)
    gen.add_argument("seed", type=int)
    gen.add_argument("--directory", default=".")
    gen.add_argument("--integerUpperBound", type=float, help="bound on integer second-level columns")

    prof = commands.add_parser("profile", help="run configurations over a corpus and write a CSV")
    prof.add_argument("corpus", help="directory of .mps/.aux pairs")
    prof.add_argument("configs", nargs="+", help="strategy names, e.g. withPoolWhenXYInt-LFixed:fractional")
    prof.add_argument("--timeLimit", type=float, help="seconds per run")
    prof.add_argument("--jobs", type=int, default=1)
    prof.add_argument("--output", default="profile.csv")
    prof.add_argument("--constantRhs", action="store_true")
    return parser


def params_from_args(args:argparse.Namespace) -> SolverParams:
    """Builds SolverParams from the named strategy and the explicit flags.

    Raises:
        InvalidParameterException: on an unknown strategy name.
    """
    overrides = {}
    for field in BOOLEAN_FLAGS.values():
        value = getattr(args, field)
        if value is not None:
            overrides[field] = value
    if args.branchStrategy:
        overrides["branch_strategy"] = BranchStrategy[args.branchStrategy.capitalize()]
    if args.cutStrategy:
        overrides["cut_strategy"] = CUT_NAMES[args.cutStrategy]
    if args.search:
        overrides["search"] = SEARCH_NAMES[args.search]
    for flag, field in (("heuristicFrequency", "heuristic_frequency"), ("weights", "weights"),
                        ("timeLimit", "time_limit"), ("nodeLimit", "node_limit"),
                        ("maxCutRounds", "max_cut_rounds"), ("milpNodeLimit", "milp_node_limit")):
        value = getattr(args, flag)
        if value is not None:
            overrides[field] = value
    overrides["feas_check_solver"] = args.feasCheckSolver
    return SolverParams.from_preset(args.strategy, **overrides)


def cmd_solve(args:argparse.Namespace) -> int:
    """Solves one instance, prints a summary and optionally writes the solution file."""
    params = params_from_args(args)
    instance = read_instance(args.mps, args.aux, args.constantRhs)
    result = BilevelSolver(instance, params).solve()
    stats = result.statistics
    print("status      {:s}".format(result.status.name))
    print("objective   {:g}".format(result.objective))
    print("lower bound {:g}".format(result.lower_bound))
    if result.x is not None:
        print("x           {}".format(" ".join("{:g}".format(v) for v in result.x)))
        print("y           {}".format(" ".join("{:g}".format(v) for v in result.y)))
    print("nodes {:d}  sl {:d}  ub {:d}  cuts {:d}  time {:.3f}s".format(
        stats["nodes"], stats["sl_milp_solves"], stats["ub_solves"], stats["cuts_added"], stats["wall_time"]))
    if args.output:
        write_solution(result, args.output, instance)
    return 0


def cmd_validate(args:argparse.Namespace) -> int:
    """Prints diagnostics; exit code 1 when there are any."""
    instance = read_instance(args.mps, args.aux, args.constantRhs)
    diagnostics = validate(instance)
    for diagnostic in diagnostics:
        print("{:s}: {:s}".format(diagnostic.kind, diagnostic.message))
    if not diagnostics:
        print(instance.describe())
    return 1 if diagnostics else 0


def cmd_gen(args:argparse.Namespace) -> int:
    mps_path, aux_path = generate_files(profile_from_name(args.profile), args.size, args.seed,
                                        args.directory, args.integerUpperBound)
    print(mps_path)
    print(aux_path)
    return 0


def cmd_profile(args:argparse.Namespace) -> int:
    rows = run_profile(args.corpus, args.configs, args.timeLimit, args.jobs, args.constantRhs)
    write_csv(rows, args.output)
    for config, (taus, fractions) in performance_profile(rows).items():
        print("{:s}: {:.0%} solved within {:g}x of the best".format(config, fractions[-1], taus[-1]))
    return 0


COMMANDS = {"solve": cmd_solve, "validate": cmd_validate, "gen": cmd_gen, "profile": cmd_profile}


def main(argv:list = None) -> int:
    """Entry point of the miblp console script.

    Returns:
        int: 0 on success, 1 on a reported error, 2 on bad usage.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.logLevel), format="%(levelname)s %(name)s: %(message)s")
    warnings.simplefilter("default", MiblpWarning)
    try:
        return COMMANDS[args.command](args)
    except (MiblpException, OSError) as error:
        print("error: {}".format(error), file=sys.stderr)
        return 1
