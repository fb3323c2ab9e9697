import contextlib
import io
import os
import tempfile
import unittest

import pandas as pd
import simplejson as json

from polyjacobi_analysis import sweep_spectral_bounds, verify_spectral_bounds


def run_main(module, args_list):
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        status = module.main(args_list)
    return status, stdout.getvalue()


class Tests(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.config_path = os.path.join(self.temp_dir.name, "config.json")
        with open(self.config_path, "wt") as f:
            json.dump({"sigma": 1, "gamma": 1, "theorems": ["thm2"], "b": [[0, 3.0]]}, f)

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_single_point_matches_verify(self):
        status, output = run_main(sweep_spectral_bounds, ["--config", self.config_path])
        self.assertEqual(status, 0)
        sweep_df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(sweep_df.columns[:4]), ["sigma", "gamma", "amplitude_scale", "theorem"])

        status, output = run_main(verify_spectral_bounds, ["--config", self.config_path])
        self.assertEqual(status, 0)
        verify_df = pd.read_csv(io.StringIO(output))

        self.assertEqual(len(sweep_df), 1)
        self.assertSetEqual(set(sweep_df.columns), set(verify_df.columns) | {"amplitude_scale"})
        self.assertNotEqual(list(sweep_df.columns), list(verify_df.columns))
        self.assertEqual(sweep_df["amplitude_scale"][0], 1.0)
        for column in "lhs", "rhs", "ratio", "constant", "instance_digest", "status":
            self.assertEqual(sweep_df[column][0], verify_df[column][0], column)

    def test_ratio_decreases_with_amplitude(self):
        status, output = run_main(sweep_spectral_bounds, ["--config", self.config_path, "--amplitude-scale", "4,1,2"])
        self.assertEqual(status, 0)
        df = pd.read_csv(io.StringIO(output))
        self.assertListEqual(list(df["amplitude_scale"]), [1.0, 2.0, 4.0])
        ratios = list(df["ratio"])
        self.assertGreater(ratios[0], ratios[1])
        self.assertGreater(ratios[1], ratios[2])
        self.assertTrue((df["status"] == "pass").all())

    def test_grid_is_sorted(self):
        status, output = run_main(sweep_spectral_bounds, [
            "--config", self.config_path, "--sigma", "2,1", "--gamma", "2,1", "--amplitude-scale", "0.5,1"])
        self.assertEqual(status, 0)
        df = pd.read_csv(io.StringIO(output))
        self.assertEqual(len(df), 8)
        keys = list(zip(df["sigma"], df["gamma"], df["amplitude_scale"], df["theorem"]))
        self.assertListEqual(keys, sorted(keys))

    def test_deterministic_output(self):
        args_list = ["--config", self.config_path, "--sigma", "1,2", "--gamma", "1,1.5"]
        self.assertEqual(run_main(sweep_spectral_bounds, args_list), run_main(sweep_spectral_bounds, args_list))

    def test_usage_errors(self):
        for args_list in [
            ["--config", self.config_path, "--sigma", "0"],
            ["--config", self.config_path, "--gamma", "0.5"],
            ["--config", self.config_path, "--amplitude-scale", "x"],
        ]:
            with contextlib.redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as context:
                    sweep_spectral_bounds.main(args_list)
            self.assertEqual(context.exception.code, 2)
