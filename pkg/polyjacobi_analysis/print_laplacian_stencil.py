"""Print the exact (2 sigma + 1)-point stencil of Delta_D^sigma and the off-diagonal coefficients omega_1..omega_sigma
of the free polydiagonal operator W_sigma^0.

Example:

    $ python3 -m polyjacobi_analysis.print_laplacian_stencil --sigma 2
    sigma: 2
    stencil: 1 -4 6 -4 1
    omegas: -4 1
"""

import argparse
import logging
import sys

import numpy as np

from polyjacobi_analysis.utils.export_utils import write_text
from polyjacobi_analysis.utils.misc_utils import EXIT_BOUND_FAILURE, EXIT_PASS
from polyjacobi_analysis.utils.operator_core import (
    SIGMA_CAP, Sequence, apply_laplacian_power, combinatorial_identities, laplacian_stencil, omegas)

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
    p.add_argument("--show-identities", action="store_true",
                   help="Also print both sides of the binomial identities used to derive the stencil, at a = 2 sigma")
    p.add_argument("--check-recursion", action="store_true",
                   help="Apply Delta_D sigma times to the unit impulse and exit with status 1 if the result differs "
                        "from the closed-form stencil")
    p.add_argument("-o", "--out", help="Output path. Prints to stdout if not specified.")
    args = p.parse_args(args=args_list)

    if not 1 <= args.sigma <= SIGMA_CAP:
        p.error(f"--sigma must be between 1 and {SIGMA_CAP}, got {args.sigma}")

    return args


def format_stencil(sigma):
    """Text table with the stencil and the omegas, one line each."""
    stencil = laplacian_stencil(sigma)
    lines = [
        f"sigma: {sigma}",
        "stencil: " + " ".join(str(c) for c in stencil.coeffs),
        "omegas: " + " ".join(str(w) for w in omegas(sigma)),
    ]
    return "\n".join(lines) + "\n"


def format_identities(sigma):
    lines = []
    for name, (lhs, rhs) in combinatorial_identities(2 * sigma).items():
        lines.append(f"identity ({name}): {lhs} {rhs}")
    return "\n".join(lines) + "\n"


def recursion_matches_stencil(sigma):
    recursive = apply_laplacian_power(sigma, Sequence.impulse(0), mode="recursive")
    closed_form = Sequence(-sigma, np.array(laplacian_stencil(sigma).coeffs))
    return recursive == closed_form


def main(args_list=None):
    args = parse_args(args_list)

    text = format_stencil(args.sigma)
    if args.show_identities:
        text += format_identities(args.sigma)

    write_text(text, args.out)

    if args.check_recursion:
        if not recursion_matches_stencil(args.sigma):
            logging.error(f"Recursive construction of Delta_D^{args.sigma} does not match the stencil")
            return EXIT_BOUND_FAILURE
        logging.info(f"Recursive construction of Delta_D^{args.sigma} matches the stencil")

    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
