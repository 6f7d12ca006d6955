"""Preset subcommand for the pmcorr command line tool."""

import argparse
import sys

import pandas as pd

from .utils import errors, scenario


def register(subparsers: argparse.ArgumentParser) -> None:
    """Registers the subcommand arguments with the main program.

    Args:
        subparsers (argparse.ArgumentParser): subparsers object to add on to.
    """

    subcommand = subparsers.add_parser("preset", help="List or print the built-in scenarios.")
    subcommand.add_argument("action", choices=["list", "show"])
    subcommand.add_argument("name", nargs="?", help="Preset to print with `show`.")
    subcommand.add_argument(
        "-v",
        "--verbose",
        help="Enable verbose logging (DEBUG logging level).",
        default=False,
        action="store_true",
    )
    subcommand.set_defaults(run=run, default_output_filename=None)
    return subcommand


def run(args: argparse.Namespace) -> None:
    """Prints the registry or one preset; a shown preset is itself a valid config file."""

    if args.action == "list":
        table = pd.DataFrame(
            [(name, preset.description) for name, preset in scenario.PRESETS.items()],
            columns=["name", "description"],
        )
        sys.stdout.write(table.to_string(index=False) + "\n")
        return

    if not args.name:
        errors.raise_error(
            "`preset show` needs a preset NAME.", suggest_report=False, error=errors.ConfigError
        )
    sys.stdout.write(scenario.get_preset(args.name).text)
