"""Run the seeded randomized verification suite and print a summary. Exits with status 1 if any check failed and
3 if the only problem is that some spectrum did not converge.
"""

import argparse
import logging
import sys

import pandas as pd

from polyjacobi_analysis.utils.export_utils import write_csv, write_text
from polyjacobi_analysis.utils.misc_utils import EXIT_BOUND_FAILURE, EXIT_NOT_CONVERGED, EXIT_PASS, parse_window
from polyjacobi_analysis.utils.operator_core import SIGMA_CAP
from polyjacobi_analysis.utils.verification_harness import RandomInstanceSpec, SuiteEntry, run_suite

logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s: %(message)s")


def parse_args(args_list=None):
    """Parse command-line args and return the ArgumentParser args object.

    Args:
        args_list (list): optional artificial list of command-line args to use for testing.

    Returns:
        args
    """

    defaults = RandomInstanceSpec()
    p = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seed", type=int, default=defaults.seed, help="Random seed of the instance stream")
    p.add_argument("--count", type=int, default=100, help="Number of instances per check")
    p.add_argument("--support-radius", type=int, default=defaults.support_radius,
                   help="Random sequences and potentials are supported inside [-radius, radius]")
    p.add_argument("--amplitude", type=float, default=defaults.amplitude, help="Amplitude of the random entries")
    p.add_argument("--sigma-range", default="%d:%d" % defaults.sigma_range,
                   help="Inclusive range of orders, as LO:HI. Instance i uses the i-th order of the range, cyclically.")
    p.add_argument("-o", "--out", help="Output path for the summary. Prints to stdout if not specified.")
    p.add_argument("--entries-csv", help="Also write every suite entry to this CSV file")
    p.add_argument("--show-progress-bar", action="store_true", help="Show a progress bar")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args(args=args_list)

    if args.seed < 0:
        p.error(f"--seed must be nonnegative, got {args.seed}")
    if args.count < 0:
        p.error(f"--count must be nonnegative, got {args.count}")
    if args.support_radius < 0:
        p.error(f"--support-radius must be nonnegative, got {args.support_radius}")
    if not args.amplitude > 0:
        p.error(f"--amplitude must be positive, got {args.amplitude}")

    try:
        args.sigma_range = parse_window(args.sigma_range)
    except ValueError as e:
        p.error(f"--sigma-range: {e}")
    if args.sigma_range[0] < 1 or args.sigma_range[1] > SIGMA_CAP:
        p.error(f"--sigma-range must lie within 1:{SIGMA_CAP}, got {args.sigma_range[0]}:{args.sigma_range[1]}")

    return args


def main(args_list=None):
    args = parse_args(args_list)

    spec = RandomInstanceSpec(
        seed=args.seed,
        support_radius=args.support_radius,
        amplitude=args.amplitude,
        sigma_range=args.sigma_range,
        count=args.count)

    report = run_suite(spec, inject_fault=args.inject_fault, show_progress_bar=args.show_progress_bar)
    write_text(report.summary_text(), args.out)
    if args.entries_csv:
        write_csv(pd.DataFrame(report.to_rows(), columns=list(SuiteEntry._fields)), args.entries_csv)

    logging.info(f"{report.num_checks} checks, {report.num_failed} failed, digest {report.digest()}")
    if not report.passed:
        return EXIT_BOUND_FAILURE
    if report.num_indeterminate:
        return EXIT_NOT_CONVERGED
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
