"""Compute the eigenvalues of Delta_D^sigma - b, Delta_D^sigma - 4^sigma + b or W_sigma that lie outside the
essential spectrum, and write them as JSON.

The instance comes from a JSON config (--config) or from --sigma with one --b INDEX=VALUE per nonzero entry.
"""

import argparse
import logging
import sys

from polyjacobi_analysis.utils.bounds_engine import instance_digest
from polyjacobi_analysis.utils.export_utils import export_json
from polyjacobi_analysis.utils.instance_config import ConfigError, load_instance_config, parse_instance_config
from polyjacobi_analysis.utils.misc_utils import EXIT_NOT_CONVERGED, EXIT_PASS, parse_key_value
from polyjacobi_analysis.utils.spectral_engine import OPERATOR_KINDS, discrete_spectrum

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s: %(message)s")


def parse_args(args_list=None):
    """Parse command-line args and return the ArgumentParser args object.

    Args:
        args_list (list): optional artificial list of command-line args to use for testing.

    Returns:
        args
    """

    p = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--config", help="JSON instance config")
    p.add_argument("--sigma", type=int, help="Order. Overrides the config value.")
    p.add_argument("--b", action="append", metavar="INDEX=VALUE",
                   help="Nonzero diagonal entry b_INDEX = VALUE. Can be specified more than once. Only used "
                        "without --config.")
    p.add_argument("--operator", choices=list(OPERATOR_KINDS),
                   help="Operator kind. Defaults to the config operator, or h_sigma without --config.")
    p.add_argument("--tolerance", type=float, help="Convergence tolerance for the outside eigenvalues")
    p.add_argument("--padding", type=int, help="Initial window padding on each side of the perturbation")
    p.add_argument("--max-doublings", type=int, help="Maximum number of window doublings")
    p.add_argument("-o", "--out", help="Output JSON path. Prints to stdout if not specified.")
    args = p.parse_args(args=args_list)

    try:
        if args.config:
            if args.b:
                p.error("--b can only be used without --config")
            config = load_instance_config(args.config)
        else:
            if args.sigma is None:
                p.error("Must specify --config or --sigma")
            b_entries = []
            for key_value in args.b or []:
                try:
                    n, value = parse_key_value(key_value)
                    b_entries.append([int(n), float(value)])
                except ValueError:
                    p.error(f"Invalid --b value: {key_value}. Expected INDEX=VALUE")
            config = parse_instance_config({"sigma": args.sigma, "b": b_entries}, source="command line")

        args.config = config.with_overrides(sigma=args.sigma, tolerance=args.tolerance)
    except ConfigError as e:
        p.error(str(e))

    if args.padding is not None and args.padding < 1:
        p.error(f"--padding must be positive, got {args.padding}")
    if args.max_doublings is not None and args.max_doublings < 1:
        p.error(f"--max-doublings must be positive, got {args.max_doublings}")

    return args


def main(args_list=None):
    args = parse_args(args_list)
    config = args.config

    operator = args.operator or config.operator
    kwargs = config.spectrum_kwargs()
    if args.padding is not None:
        kwargs["padding"] = args.padding
    if args.max_doublings is not None:
        kwargs["max_doublings"] = args.max_doublings

    coeffs = config.to_coefficients()
    report = discrete_spectrum(coeffs, operator, **kwargs)
    logging.info(f"{operator}, sigma = {config.sigma}: {len(report.eigenvalues_below)} eigenvalue(s) below and "
                 f"{len(report.eigenvalues_above)} above the essential spectrum {list(report.essential_interval)}")

    result = report.to_dict()
    result["instance_digest"] = instance_digest(coeffs)
    export_json(result, args.out)

    return EXIT_PASS if report.converged else EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
