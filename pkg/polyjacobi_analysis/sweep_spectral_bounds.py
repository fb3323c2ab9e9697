"""Verify the eigenvalue bounds over the grid sigma x gamma x amplitude scale for one config instance, where the
amplitude scale multiplies b and every band deviation. The spectrum of each (sigma, amplitude scale, theorem) is
computed once and reused for every gamma.

Rows carry the verify columns with sigma, gamma, amplitude_scale and theorem moved to the front. A one-point grid
at amplitude scale 1 has the same values as the verify row, but its line is not byte-identical to it.
"""

import argparse
import itertools
import logging
import sys

import pandas as pd
import tqdm

from polyjacobi_analysis.utils.bounds_engine import BoundReport, verify_bounds
from polyjacobi_analysis.utils.export_utils import write_csv
from polyjacobi_analysis.utils.instance_config import ConfigError, load_instance_config
from polyjacobi_analysis.utils.misc_utils import exit_status, parse_number_list

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s: %(message)s")

GRID_COLUMNS = ["sigma", "gamma", "amplitude_scale", "theorem"]


def parse_args(args_list=None):
    """Parse command-line args and return the ArgumentParser args object.

    Args:
        args_list (list): optional artificial list of command-line args to use for testing.

    Returns:
        args
    """

    p = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--config", required=True, help="JSON instance config")
    p.add_argument("--sigma", help="Comma-separated orders. Defaults to the config sigma.")
    p.add_argument("--gamma", help="Comma-separated Riesz mean exponents. Defaults to the config gammas.")
    p.add_argument("--amplitude-scale", default="1", help="Comma-separated factors applied to b and the deviations")
    p.add_argument("--tolerance", type=float, help="Convergence tolerance for the outside eigenvalues")
    p.add_argument("-o", "--out", help="Output CSV path. Prints to stdout if not specified.")
    p.add_argument("--show-progress-bar", action="store_true", help="Show a progress bar")
    args = p.parse_args(args=args_list)

    try:
        sigmas = parse_number_list(args.sigma, value_type=int) if args.sigma else None
        gammas = parse_number_list(args.gamma) if args.gamma else None
        args.amplitude_scale = parse_number_list(args.amplitude_scale)
    except ValueError as e:
        p.error(str(e))

    try:
        config = load_instance_config(args.config).with_overrides(gammas=gammas, tolerance=args.tolerance)
        args.configs = [config.with_overrides(sigma=sigma) for sigma in sorted(set(sigmas or [config.sigma]))]
    except ConfigError as e:
        p.error(str(e))

    return args


def sweep(configs, amplitude_scales, show_progress_bar=False):
    """Verify every grid point and return a DataFrame sorted by (sigma, gamma, amplitude_scale, theorem)."""
    grid = list(itertools.product(configs, sorted(set(amplitude_scales))))
    if show_progress_bar:
        grid = tqdm.tqdm(grid, unit=" grid points")

    rows = []
    for config, scale in grid:
        coeffs = config.to_coefficients().scaled(scale)
        for report in verify_bounds(config.theorems, config.gammas, coeffs, **config.spectrum_kwargs()):
            row = report.to_dict()
            row["amplitude_scale"] = float(scale)
            rows.append(row)

    columns = GRID_COLUMNS + [c for c in BoundReport._fields if c not in GRID_COLUMNS]
    df = pd.DataFrame(rows, columns=columns)
    return df.sort_values(GRID_COLUMNS, kind="mergesort").reset_index(drop=True)


def main(args_list=None):
    args = parse_args(args_list)

    df = sweep(args.configs, args.amplitude_scale, show_progress_bar=args.show_progress_bar)
    write_csv(df, args.out)

    status = exit_status(df["status"])
    logging.info(f"{len(df)} row(s), exit status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
