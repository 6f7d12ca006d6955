"""Asymptotic subcommand for the pmcorr command line tool."""

import argparse

import pandas as pd

from . import utils
from .utils import runs, scenario


def register(subparsers: argparse.ArgumentParser) -> None:
    """Registers the subcommand arguments with the main program.

    Args:
        subparsers (argparse.ArgumentParser): subparsers object to add on to.
    """

    subcommand = subparsers.add_parser(
        "asymptotic",
        help="Steady-state concurrence and discord swept along one parameter.",
        parents=[utils.args.get_common_args()],
    )
    subcommand.add_argument(
        "--axis",
        choices=scenario.SWEEP_AXES,
        required=True,
        help="T: mean temperature (keeps T1 - T2); dT: T1 - T2 (keeps the mean); "
        + "b: field inhomogeneity; D: Dzyaloshinskii-Moriya strength.",
    )
    subcommand.add_argument("--from", dest="start", type=float, required=True)
    subcommand.add_argument("--to", dest="stop", type=float, required=True)
    subcommand.add_argument("--points", type=int, default=50)
    subcommand.set_defaults(run=run, default_output_filename="asymptotic")
    return subcommand


def run(args: argparse.Namespace) -> pd.DataFrame:
    """Main method to run the subcommand.

    Args:
        args (argparse.Namespace): parsed arguments from the main module.

    Returns:
        pd.DataFrame: one row per sweep point, in sweep order.
    """

    sweep = scenario.SweepSpec(args.axis, args.start, args.stop, args.points)
    return runs.run_asymptotic(scenario.load(args), sweep, ncpus=args.ncpus)
