"""
The ``verify`` console script.

``verify [run] --theorems T21,T25 --dims 2,3 ...`` sweeps the grid,
``verify sensitivity --seed 7`` searches for a violation with a function
outside the hypothesis class and ``verify oracle`` re-derives the stored
fixture values.
"""

import argparse
import logging
import sys

import operator_means as om

from operator_means import oracle
from operator_means.harness import Harness, HarnessConfig, run_sensitivity, summarize


logger = logging.getLogger(__name__)

COMMANDS = ("run", "sensitivity", "oracle")

# exit status for configuration errors
USAGE_ERROR = 2

# CLI flag: harness keyword
RUN_FLAGS = {
    "theorems": "theorem_ids",
    "dims": "dims",
    "weights": "weight_grid",
    "alphas": "alphas",
    "betas": "betas",
    "gammas": "gammas",
    "deltas": "deltas",
    "upsilons": "upsilon_grid",
    "functions": "function_specs",
    "maps": "map_specs",
    "trials": "trials_per_cell",
    "seed": "seed",
    "eig_range": "eig_range",
    "out": "output_path",
    "format": "format",
    "pairs": "pairs_per_list",
    "parallel": "parallel",
    "n_jobs": "n_jobs",
}


def _add_verbose(parser):
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr.")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="verify",
        description="Verify refinement inequalities for operator means on random positive definite matrices.",
    )
    commands = parser.add_subparsers(dest="command")

    run = commands.add_parser("run", help="Sweep the grid (default command).")
    run.add_argument("--theorems", help='Comma-separated theorem ids, or "all".')
    run.add_argument("--dims", help="Comma-separated dimensions, e.g. 2,3.")
    run.add_argument("--weights", help="Weight grid; default for alphas to deltas.")
    run.add_argument("--alphas")
    run.add_argument("--betas")
    run.add_argument("--gammas")
    run.add_argument("--deltas")
    run.add_argument("--upsilons", help="Power-path parameters in [-1, 1].")
    run.add_argument("--functions", help="Comma-separated function specs, e.g. neg_power:0.5,log1p.")
    run.add_argument(
        "--maps",
        action="append",
        help='Map spec, e.g. pinching:1,1. Repeat the flag or separate with ";".',
    )
    run.add_argument("--trials", type=int, help="Trials per cell.")
    run.add_argument("--seed", type=int)
    run.add_argument("--eig-range", help="lo,hi of generated eigenvalues.")
    run.add_argument("--pairs", type=int, help="Pairs per list for sums.")
    run.add_argument("--out", help="Write the report here.")
    run.add_argument("--format", choices=["json", "csv"])
    run.add_argument("--config", help="JSON file of harness settings; flags win.")
    run.add_argument("--parallel", action="store_true", default=None)
    run.add_argument("--n-jobs", type=int)
    _add_verbose(run)

    sensitivity = commands.add_parser(
        "sensitivity", help="Search for a violation of T21 by exp_neg (exit 0 iff found)."
    )
    sensitivity.add_argument("--seed", type=int, default=om.DEFAULTS["seed"])
    sensitivity.add_argument("--trials", type=int, default=10000)
    sensitivity.add_argument("--function", default="exp_neg")
    sensitivity.add_argument("--out", help="Write the result as JSON here.")
    _add_verbose(sensitivity)

    fixtures = commands.add_parser("oracle", help="Re-derive the fixture values and compare them to the stored ones.")
    fixtures.add_argument("--out", help="Where to write the derived fixtures.")
    _add_verbose(fixtures)
    return parser


def _setup_logging(verbose):
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler.setLevel(logging.INFO if verbose else logging.WARNING)
    om.logger.addHandler(handler)
    return handler


def _run_kwargs(args):
    kwargs = {}
    for flag, key in RUN_FLAGS.items():
        value = getattr(args, flag)
        if value is None:
            continue
        if flag == "maps":
            value = [text for item in value for text in item.split(";")]
        kwargs[key] = value
    return kwargs


def cmd_run(args):
    kwargs = _run_kwargs(args)
    if args.config:
        config = HarnessConfig.from_file(args.config, **kwargs)
    else:
        config = HarnessConfig.from_kwargs(**kwargs)

    report = Harness(config).run()
    for line in summarize(report):
        print(line)
    return report.exit_status


def cmd_sensitivity(args):
    result = run_sensitivity(seed=args.seed, trials=args.trials, function=args.function)
    if args.out:
        with open(args.out, "w") as f:
            f.write(result.to_json())
    if result.found:
        print(f"violation found after {result.trials_run} trials: weakest gap {result.report.weakest_gap:.3e}")
    else:
        print(f"no violation in {result.trials_run} trials")
    return result.exit_status


def cmd_oracle(args):
    derived = oracle.derive_fixtures()
    path = oracle.write_fixtures(derived, args.out)
    mismatches = oracle.compare(derived, oracle.load_fixtures())
    print(f"{len(derived)} fixtures written to {path}")
    for name in mismatches:
        print(f"mismatch: {name}")
    return 0 if not mismatches else 1


def main(argv=None):
    """Entry point of the ``verify`` console script.

    Returns
    -------
    int
        The exit status: 0 on success, 1 when an expected chain link fails
        (or no violation is found in sensitivity mode, or a fixture differs)
        and 2 for configuration errors.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS + ("-h", "--help"):
        argv.insert(0, "run")
    args = build_parser().parse_args(argv)

    handler = _setup_logging(args.verbose)
    level = om.logger.level
    if args.verbose:
        om.logger.setLevel(logging.INFO)
    try:
        if args.command == "sensitivity":
            return cmd_sensitivity(args)
        if args.command == "oracle":
            return cmd_oracle(args)
        return cmd_run(args)
    # SpecSyntaxError is a ValueError
    except (AssertionError, ValueError) as e:
        print(f"verify: error: {e}", file=sys.stderr)
        return USAGE_ERROR
    finally:
        om.logger.removeHandler(handler)
        om.logger.setLevel(level)


if __name__ == "__main__":
    sys.exit(main())
