"""Argparse utilities for the pmcorr command line tool."""

import argparse
import multiprocessing


def get_common_args() -> argparse.ArgumentParser:
    """Common arguments associated with the computing subcommands in this tool.

    Returns:
        argparse.ArgumentParser: the parser
    """

    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="Scenario file with one `key = value` per line.")
    source.add_argument("--preset", help="Name of a built-in scenario (see `pmcorr preset list`).")
    common.add_argument(
        "--set",
        help="Override a scenario key, e.g. `--set D=1.5`. May be repeated.",
        dest="overrides",
        metavar="KEY=VALUE",
        action="append",
        default=[],
    )
    common.add_argument("-n", "--ncpus", type=int, default=multiprocessing.cpu_count())
    common.add_argument(
        "-o",
        "--out",
        "--output-file",
        help="CSV file to write, `-` for stdout.",
        dest="output_file",
        type=str,
        default=None,
    )
    common.add_argument(
        "-v",
        "--verbose",
        help="Enable verbose logging (DEBUG logging level).",
        default=False,
        action="store_true",
    )
    return common
