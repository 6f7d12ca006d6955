"""Validate subcommand for the pmcorr command line tool."""

import argparse

from logzero import logger

from . import utils
from .core import oracle
from .utils import errors, runs, scenario

MODES = {"outside": "hamiltonian_outside", "inside": "hamiltonian_inside"}


def register(subparsers: argparse.ArgumentParser) -> None:
    """Registers the subcommand arguments with the main program.

    Args:
        subparsers (argparse.ArgumentParser): subparsers object to add on to.
    """

    subcommand = subparsers.add_parser(
        "validate",
        help="Cross-check the closed-form solution against numerical oracles.",
        parents=[utils.args.get_common_args()],
    )
    subcommand.add_argument(
        "--mode",
        choices=list(MODES),
        default="outside",
        help="Whether the commutator sits outside or inside the memory convolution.",
    )
    subcommand.add_argument("--step", type=float, default=oracle.OracleConfig.step)
    subcommand.add_argument("--tolerance", type=float, default=oracle.OracleConfig.tolerance)
    subcommand.add_argument("--grid-theta", type=int, default=512)
    subcommand.add_argument("--grid-phi", type=int, default=1024)
    subcommand.set_defaults(run=run, default_output_filename="validate")
    return subcommand


def run(args: argparse.Namespace) -> None:
    """Main method to run the subcommand. Writes the report, then fails if any check did.

    Args:
        args (argparse.Namespace): parsed arguments from the main module.

    Raises:
        ValidationFailure: if any check exceeded its tolerance.
    """

    cfg = oracle.OracleConfig(mode=MODES[args.mode], step=args.step, tolerance=args.tolerance)
    result = runs.run_validate(
        scenario.load(args), cfg, ncpus=args.ncpus, grid=(args.grid_theta, args.grid_phi)
    )

    output_file = args.output_file or args.default_output_filename + ".csv"
    logger.info("Writing validation report to %s.", output_file)
    utils.table.write_table(result, output_file)

    failed = runs.failed_checks(result)
    if failed:
        errors.raise_error(
            f"{len(failed)} validation check(s) failed: {', '.join(failed)}.",
            suggest_report=False,
            error=errors.ValidationFailure,
        )
    logger.info("All validation checks passed.")
