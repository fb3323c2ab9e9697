import os
import tempfile
import unittest

from polyjacobi_analysis.utils.instance_config import ConfigError, load_instance_config, parse_instance_config
from polyjacobi_analysis.utils.operator_core import Sequence


class Tests(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def write_config(self, text):
        path = os.path.join(self.temp_dir.name, "config.json")
        with open(path, "wt") as f:
            f.write(text)
        return path

    def test_defaults(self):
        config = parse_instance_config({"sigma": 1, "b": [[0, 3.0]]})
        self.assertEqual(config.sigma, 1)
        self.assertListEqual(config.gammas, [1.0])
        self.assertEqual(config.operator, "h_sigma")
        self.assertListEqual(config.theorems, ["thm2", "cor3"])
        self.assertDictEqual(config.spectrum_kwargs(), {})
        self.assertEqual(config.to_coefficients().b, Sequence(0, [3.0]))

        config = parse_instance_config({"sigma": 2, "operator": "w_sigma", "deviations": [[2, -1, 0.25]]})
        self.assertListEqual(config.theorems, ["thm4"])
        coeffs = config.to_coefficients()
        self.assertEqual(coeffs.deviations[1], Sequence(-1, [0.25]))
        self.assertAlmostEqual(coeffs.coefficient(2, -1), 1.25)

    def test_all_keys(self):
        config = parse_instance_config({
            "sigma": 3, "gamma": [1, 2.5], "operator": "w_sigma", "theorems": ["thm4"], "b": [[-1, -0.5]],
            "deviations": [[1, 0, 0.1]], "tolerance": 1e-9, "edge_margin": 0.001, "padding": 30, "max_doublings": 2,
        })
        self.assertListEqual(config.gammas, [1.0, 2.5])
        self.assertDictEqual(config.spectrum_kwargs(), {
            "tolerance": 1e-9, "edge_margin": 0.001, "padding": 30, "max_doublings": 2})

    def test_invalid_values(self):
        for data, key in [
            ({"sigma": 0}, "sigma"),
            ({"sigma": 15}, "sigma"),
            ({"sigma": 1.5}, "sigma"),
            ({"sigma": True}, "sigma"),
            ({"gamma": 1}, "sigma"),
            ({"sigma": 1, "gamma": 0.5}, "gamma"),
            ({"sigma": 1, "gamma": []}, "gamma"),
            ({"sigma": 1, "operator": "h_sigma_shifted"}, "operator"),
            ({"sigma": 1, "theorems": ["thm3"]}, "theorems"),
            ({"sigma": 1, "b": [[0.5, 1]]}, "b"),
            ({"sigma": 1, "b": [[0, "x"]]}, "b"),
            ({"sigma": 1, "deviations": [[2, 0, 1.0]]}, "deviations"),
            ({"sigma": 1, "tolerance": 0}, "tolerance"),
            ({"sigma": 1, "padding": 0}, "padding"),
            ({"sigma": 1, "color": "red"}, "color"),
        ]:
            with self.assertRaises(ConfigError) as context:
                parse_instance_config(data)
            self.assertIn(key, str(context.exception))

    def test_overrides(self):
        config = parse_instance_config({"sigma": 2, "gamma": 1, "deviations": [[2, 0, 0.5]]})
        config = config.with_overrides(gammas=[1, 3], tolerance=1e-6)
        self.assertListEqual(config.gammas, [1.0, 3.0])
        self.assertEqual(config.tolerance, 1e-6)
        self.assertEqual(config.with_overrides(sigma=3).sigma, 3)
        self.assertRaises(ConfigError, lambda: config.with_overrides(sigma=1))
        self.assertRaises(ConfigError, lambda: config.with_overrides(gammas=[0.9]))

    def test_load_instance_config(self):
        path = self.write_config('{"sigma": 1, "gamma": [1, 2], "b": [[0, 3.0]]}')
        config = load_instance_config(path)
        self.assertEqual(config.sigma, 1)
        self.assertListEqual(config.b_entries, [(0, 3.0)])

        path = self.write_config('{\n  "sigma": 1,\n  "b": [[0, 3.0]\n}')
        with self.assertRaises(ConfigError) as context:
            load_instance_config(path)
        self.assertIn("line 4", str(context.exception))

        self.assertRaises(ConfigError, lambda: load_instance_config(os.path.join(self.temp_dir.name, "missing.json")))
        self.assertRaises(ConfigError, lambda: load_instance_config(self.write_config("[1, 2]")))
