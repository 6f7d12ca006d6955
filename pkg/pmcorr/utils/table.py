"""CSV output of result tables."""

import sys

import pandas as pd

FLOAT_FORMAT = "%.12g"


def format_table(result: pd.DataFrame) -> str:
    """Renders a result table exactly as it is written to disk."""

    return result.to_csv(
        None, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="nan"
    )


def write_table(result: pd.DataFrame, output_file: str) -> None:
    """Writes `result` as UTF-8 CSV to `output_file`, or to stdout for `-`."""

    text = format_table(result)
    if output_file == "-":
        sys.stdout.write(text)
        return

    with open(output_file, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
