"""Evolve subcommand for the pmcorr command line tool."""

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
        "evolve",
        help="Concurrence and discord along the time grid of a scenario.",
        parents=[utils.args.get_common_args()],
    )
    subcommand.set_defaults(run=run, default_output_filename="evolve")
    return subcommand


def run(args: argparse.Namespace) -> pd.DataFrame:
    """Main method to run the subcommand.

    Args:
        args (argparse.Namespace): parsed arguments from the main module.

    Returns:
        pd.DataFrame: one row per time point.
    """

    return runs.run_evolve(scenario.load(args), ncpus=args.ncpus)
