"""Tabulate the Fourier symbol of Delta_D^sigma on a uniform grid over [-pi, pi] next to the closed form
(4 sin^2(x/2))^sigma, as CSV with the columns x,symbol,closed_form,abs_diff and a final max_abs_diff row.
"""

import argparse
import logging
import math
import sys

import numpy as np
import pandas as pd

from polyjacobi_analysis.utils.export_utils import write_csv
from polyjacobi_analysis.utils.misc_utils import EXIT_PASS, format_float
from polyjacobi_analysis.utils.operator_core import SIGMA_CAP, symbol, symbol_closed_form

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s: %(message)s")


def parse_args(args_list=None):
    """Parse command-line args and return the ArgumentParser args object.

    Args:
        args_list (list): optional artificial list of command-line args to use for testing.

    Returns:
        args
    """

    p = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--sigma", type=int, default=1, help=f"Order of the Laplacian power, between 1 and {SIGMA_CAP}")
    p.add_argument("--samples", type=int, default=1001, help="Number of grid points, including both endpoints")
    p.add_argument("-o", "--out", help="Output CSV path. Prints to stdout if not specified.")
    args = p.parse_args(args=args_list)

    if not 1 <= args.sigma <= SIGMA_CAP:
        p.error(f"--sigma must be between 1 and {SIGMA_CAP}, got {args.sigma}")
    if args.samples < 2:
        p.error(f"--samples must be at least 2, got {args.samples}")

    return args


def compute_symbol_table(sigma, samples):
    """Return a DataFrame with the symbol and its closed form at samples uniformly spaced points of [-pi, pi]."""
    x = np.linspace(-math.pi, math.pi, samples)
    values = symbol(sigma, x)
    closed_form = symbol_closed_form(sigma, x)
    return pd.DataFrame({
        "x": x,
        "symbol": values,
        "closed_form": closed_form,
        "abs_diff": np.abs(values - closed_form),
    })


def main(args_list=None):
    args = parse_args(args_list)

    df = compute_symbol_table(args.sigma, args.samples)
    max_abs_diff = float(df["abs_diff"].max())
    logging.info(f"sigma = {args.sigma}: max |symbol - closed form| over {args.samples} points = {max_abs_diff}")

    write_csv(df, args.out, footer_rows=[["max_abs_diff", "", "", format_float(max_abs_diff)]])

    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
