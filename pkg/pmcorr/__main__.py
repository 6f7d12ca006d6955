"""Main module for the pmcorr command line tool."""

import argparse
import logging
import sys

import pandas as pd
from logzero import logger

from . import asymptotic, evolve, preset, utils, validate

SUBCOMMANDS = [evolve, asymptotic, validate, preset]


def get_args(argv=None) -> argparse.Namespace:
    """Gets the command line arguments using argparse.

    Returns:
        argparse.Namespace: parsed arguments
    """

    parser = argparse.ArgumentParser(
        description="Entanglement and quantum discord of two qubits coupled to two thermal "
        + "baths with an exponential memory kernel."
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    for subcommand in SUBCOMMANDS:
        if not hasattr(subcommand, "register"):
            utils.errors.raise_error(
                f"'{subcommand}' subcommand does not have arguments to register."
            )

        subcommand.register(subparsers)

    return parser.parse_args(argv)


def run(argv=None) -> None:
    """Main method for module."""

    args = get_args(argv)
    logger.setLevel(logging.INFO)
    if args.verbose:
        logger.setLevel(logging.DEBUG)

    try:
        result = args.run(args)
    except utils.errors.PmcorrError as err:
        logger.error("%s: %s", type(err).__name__, err)
        sys.exit(err.exit_code)

    if result is None:
        return  # if None is returned, there is no output to write (e.g. `validate`).

    if not isinstance(result, pd.DataFrame) or not isinstance(
        args.default_output_filename, str
    ):
        utils.errors.raise_error(
            "Unhandled case where result or result_filename is not set!"
        )

    output_file = args.output_file or args.default_output_filename + ".csv"
    logger.info("Writing results to %s.", output_file)
    utils.table.write_table(result, output_file)


if __name__ == "__main__":
    run()
