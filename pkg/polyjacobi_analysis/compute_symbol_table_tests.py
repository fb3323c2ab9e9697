import contextlib
import io
import unittest

import pandas as pd

from polyjacobi_analysis.compute_symbol_table import compute_symbol_table, main


def run_main(args_list):
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        status = main(args_list)
    return status, stdout.getvalue()


class Tests(unittest.TestCase):

    def test_header_and_endpoints(self):
        status, output = run_main(["--sigma", "1", "--samples", "3"])
        self.assertEqual(status, 0)

        lines = output.split("\n")
        self.assertEqual(lines[0], "x,symbol,closed_form,abs_diff")
        self.assertEqual(len(lines), 6)
        self.assertEqual(lines[-1], "")
        self.assertTrue(lines[-2].startswith("max_abs_diff,,,"))

        df = pd.read_csv(io.StringIO("\n".join(lines[:4])))
        self.assertListEqual(list(df["symbol"]), [4, 0, 4])
        self.assertListEqual(list(df["closed_form"]), [4, 0, 4])

    def test_max_abs_diff(self):
        status, output = run_main(["--sigma", "2", "--samples", "5"])
        self.assertEqual(status, 0)
        footer = output.strip().split("\n")[-1]
        self.assertLessEqual(float(footer.split(",")[-1]), 1e-10 * 16)

    def test_symbol_grid(self):
        for sigma in range(1, 7):
            df = compute_symbol_table(sigma, 10001)
            self.assertLessEqual(df["abs_diff"].max(), 1e-10 * 4 ** sigma)
            self.assertGreaterEqual(df["symbol"].min(), -1e-12)
            self.assertLessEqual(df["symbol"].max(), 4 ** sigma * (1 + 1e-12))

    def test_deterministic_output(self):
        self.assertEqual(run_main(["--sigma", "3", "--samples", "101"]), run_main(["--sigma", "3", "--samples", "101"]))

    def test_usage_errors(self):
        for args_list in ["--samples", "1"], ["--sigma", "0"]:
            with contextlib.redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as context:
                    main(args_list)
            self.assertEqual(context.exception.code, 2)
