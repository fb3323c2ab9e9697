"""Verify the eigenvalue bounds for one instance and write one CSV row per (theorem, gamma).

Exit status: 0 if every row passes, 1 if some row fails or violates the hypothesis of its theorem, 3 if the only
problem is that some spectrum did not converge, 2 for usage and config errors.
"""

import argparse
import logging
import sys

import pandas as pd

from polyjacobi_analysis.utils.bounds_engine import THEOREMS, BoundReport, verify_bounds
from polyjacobi_analysis.utils.export_utils import write_csv
from polyjacobi_analysis.utils.instance_config import ConfigError, load_instance_config
from polyjacobi_analysis.utils.misc_utils import exit_status, parse_number_list

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s: %(message)s")


def parse_args(args_list=None):
    """Parse command-line args and return the ArgumentParser args object.

    Args:
        args_list (list): optional artificial list of command-line args to use for testing.

    Returns:
        args
    """

    p = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--config", required=True, help="JSON instance config")
    p.add_argument("--sigma", type=int, help="Order. Overrides the config value.")
    p.add_argument("--gamma", help="Comma-separated Riesz mean exponents, each >= 1. Overrides the config value.")
    p.add_argument("--theorems", help=f"Comma-separated subset of {','.join(THEOREMS)}. Overrides the config value.")
    p.add_argument("--tolerance", type=float, help="Convergence tolerance for the outside eigenvalues")
    p.add_argument("-o", "--out", help="Output CSV path. Prints to stdout if not specified.")
    p.add_argument("-v", "--verbose", action="store_true", help="Log every report")
    args = p.parse_args(args=args_list)

    gammas = None
    if args.gamma:
        try:
            gammas = parse_number_list(args.gamma)
        except ValueError as e:
            p.error(f"--gamma: {e}")

    try:
        config = load_instance_config(args.config)
        args.config = config.with_overrides(sigma=args.sigma, gammas=gammas, tolerance=args.tolerance)
    except ConfigError as e:
        p.error(str(e))

    if args.theorems:
        theorems = [t.strip() for t in args.theorems.split(",")]
        unknown = [t for t in theorems if t not in THEOREMS]
        if unknown:
            p.error(f"--theorems: unexpected value(s) {', '.join(unknown)}. Expected {', '.join(THEOREMS)}")
        args.config = args.config._replace(theorems=theorems)

    return args


def reports_to_dataframe(reports):
    return pd.DataFrame([r.to_dict() for r in reports], columns=list(BoundReport._fields))


def main(args_list=None):
    args = parse_args(args_list)
    config = args.config

    reports = verify_bounds(config.theorems, config.gammas, config.to_coefficients(), **config.spectrum_kwargs())
    for r in reports:
        if args.verbose:
            logging.info(f"{r.theorem}, sigma = {r.sigma}, gamma = {r.gamma}: lhs = {r.lhs}, rhs = {r.rhs}, "
                         f"ratio = {r.ratio}, {r.status}")

    write_csv(reports_to_dataframe(reports), args.out)

    status = exit_status(r.status for r in reports)
    logging.info(f"{len(reports)} report(s), exit status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
