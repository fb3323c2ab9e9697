import contextlib
import gzip
import logging
import sys

import simplejson as json

CSV_FLOAT_FORMAT = "%.17g"


@contextlib.contextmanager
def open_output(output_path=None):
    """Yield a text stream for output_path, or for stdout if output_path is None. Paths ending in .gz are gzipped.
    Line endings are always LF.
    """

    if output_path is None:
        yield sys.stdout
        return

    logging.info(f"Writing {output_path}")
    if output_path.endswith(".gz"):
        f = gzip.open(output_path, "wt", newline="\n")
    else:
        f = open(output_path, "wt", newline="\n")

    with f:
        yield f


def export_json(json_data, output_path=None):
    """Utility function for writing a json data structure to a file or to stdout.

    Args:
        json_data (dict or list): The .json structure to write out.
        output_path (str): Output path. Writes to stdout if None.
    """

    with open_output(output_path) as f:
        json.dump(json_data, f, indent=4, ensure_ascii=True, ignore_nan=True)
        f.write("\n")


def write_csv(df, output_path=None, footer_rows=()):
    """Write a pandas DataFrame as comma-separated values with a header row and 17 significant digit floats.

    Args:
        df (pandas.DataFrame): the table
        output_path (str): Output path. Writes to stdout if None.
        footer_rows (list): extra rows written after the table, each a list of already formatted fields
    """

    with open_output(output_path) as f:
        df.to_csv(f, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
        for row in footer_rows:
            f.write(",".join(row) + "\n")


def write_text(text, output_path=None):
    with open_output(output_path) as f:
        f.write(text)
        if not text.endswith("\n"):
            f.write("\n")
