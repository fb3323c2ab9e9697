"""polyjacobi SUBCOMMAND [flags]

Runs one of the command-line tools in this package:

    stencil    print_laplacian_stencil
    symbol     compute_symbol_table
    spectrum   compute_discrete_spectrum
    verify     verify_spectral_bounds
    sweep      sweep_spectral_bounds
    selftest   run_selftest

Run `polyjacobi SUBCOMMAND --help` for the flags of each subcommand.
"""

import argparse
import sys

from polyjacobi_analysis import (
    compute_discrete_spectrum, compute_symbol_table, print_laplacian_stencil, run_selftest, sweep_spectral_bounds,
    verify_spectral_bounds)

SUBCOMMANDS = {
    "stencil": print_laplacian_stencil,
    "symbol": compute_symbol_table,
    "spectrum": compute_discrete_spectrum,
    "verify": verify_spectral_bounds,
    "sweep": sweep_spectral_bounds,
    "selftest": run_selftest,
}


def main(args_list=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("subcommand", choices=list(SUBCOMMANDS))
    p.add_argument("subcommand_args", nargs=argparse.REMAINDER, help="Flags passed on to the subcommand")
    args = p.parse_args(args=args_list)

    return SUBCOMMANDS[args.subcommand].main(args.subcommand_args)


if __name__ == "__main__":
    sys.exit(main())
