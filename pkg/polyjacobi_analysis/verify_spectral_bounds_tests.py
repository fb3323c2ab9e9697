import contextlib
import io
import math
import os
import tempfile
import unittest

import pandas as pd
import simplejson as json

from polyjacobi_analysis.verify_spectral_bounds import main


def run_main(args_list):
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        status = main(args_list)
    return status, stdout.getvalue()


class Tests(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def write_config(self, data, filename="config.json"):
        path = os.path.join(self.temp_dir.name, filename)
        with open(path, "wt") as f:
            if isinstance(data, str):
                f.write(data)
            else:
                json.dump(data, f)
        return path

    def test_single_site(self):
        path = self.write_config({"sigma": 1, "gamma": 1, "theorems": ["thm2"], "b": [[0, 3.0]]})
        status, output = run_main(["--config", path])
        self.assertEqual(status, 0)

        df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(df.columns), [
            "theorem", "sigma", "gamma", "lhs", "rhs", "ratio", "constant", "instance_digest", "converged", "status"])
        self.assertEqual(len(df), 1)
        row = df.iloc[0]
        self.assertEqual(row["theorem"], "thm2")
        self.assertAlmostEqual(row["lhs"], math.sqrt(13) - 2, delta=1e-8)
        self.assertAlmostEqual(row["ratio"], 0.803, delta=1e-3)
        self.assertEqual(row["status"], "pass")

    def test_default_theorems_and_gamma_override(self):
        path = self.write_config({"sigma": 2, "b": [[0, 1.0], [3, 2.0]]})
        status, output = run_main(["--config", path, "--gamma", "1,2"])
        self.assertEqual(status, 0)
        df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(zip(df["theorem"], df["gamma"])), [
            ("thm2", 1.0), ("thm2", 2.0), ("cor3", 1.0), ("cor3", 2.0)])
        self.assertTrue((df["status"] == "pass").all())

    def test_empty_perturbation(self):
        path = self.write_config({"sigma": 1})
        status, output = run_main(["--config", path, "--theorems", "thm2"])
        self.assertEqual(status, 0)
        row = pd.read_csv(io.StringIO(output)).iloc[0]
        self.assertEqual(row["lhs"], 0)
        self.assertEqual(row["rhs"], 0)
        self.assertEqual(row["status"], "pass")

    def test_negative_potential_is_domain_error(self):
        path = self.write_config({"sigma": 1, "b": [[0, -1.0]], "theorems": ["thm2", "thm4"]})
        status, output = run_main(["--config", path])
        self.assertEqual(status, 1)
        df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(df["status"]), ["domain_error", "pass"])

    def test_w_sigma(self):
        path = self.write_config({
            "sigma": 2, "gamma": [1, 2], "operator": "w_sigma", "b": [[0, 1.5], [1, -2.0]],
            "deviations": [[1, 0, 0.5], [2, 1, -0.7]]})
        status, output = run_main(["--config", path])
        self.assertEqual(status, 0)
        df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(df["theorem"]), ["thm4", "thm4"])
        self.assertTrue((df["ratio"] <= 1 + 1e-9).all())

    def test_deterministic_output(self):
        path = self.write_config({"sigma": 2, "gamma": [1, 1.5], "b": [[-1, 0.5], [0, 2.0], [4, 1.25]]})
        self.assertEqual(run_main(["--config", path]), run_main(["--config", path]))

    def test_config_errors(self):
        malformed = self.write_config('{"sigma": 1,\n "b": [[0, 3.0]\n}', "malformed.json")
        unknown_key = self.write_config({"sigma": 1, "potential": []}, "unknown.json")
        bad_gamma = self.write_config({"sigma": 1, "gamma": 0.5}, "gamma.json")
        for args_list in [
            ["--config", malformed],
            ["--config", unknown_key],
            ["--config", bad_gamma],
            ["--config", os.path.join(self.temp_dir.name, "missing.json")],
            ["--config", self.write_config({"sigma": 1})] + ["--theorems", "thm9"],
            ["--config", self.write_config({"sigma": 1})] + ["--gamma", "1,x"],
        ]:
            stderr = io.StringIO()
            with contextlib.redirect_stderr(stderr):
                with self.assertRaises(SystemExit) as context:
                    main(args_list)
            self.assertEqual(context.exception.code, 2)

        stderr = io.StringIO()
        with contextlib.redirect_stderr(stderr):
            with self.assertRaises(SystemExit):
                main(["--config", malformed])
        self.assertIn("line 3", stderr.getvalue())
