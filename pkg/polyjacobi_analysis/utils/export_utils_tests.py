import contextlib
import gzip
import io
import os
import tempfile
import unittest

import pandas as pd
import simplejson as json

from polyjacobi_analysis.utils.export_utils import export_json, write_csv, write_text


class Tests(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_write_csv_to_stdout(self):
        df = pd.DataFrame([{"x": 0.1, "n": 2, "status": "pass"}, {"x": float("nan"), "n": 3, "status": "fail"}])
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout):
            write_csv(df, footer_rows=[["max", "", "1"]])

        self.assertEqual(stdout.getvalue(), "x,n,status\n0.10000000000000001,2,pass\nnan,3,fail\nmax,,1\n")

    def test_write_csv_to_file(self):
        path = os.path.join(self.temp_dir.name, "table.csv")
        write_csv(pd.DataFrame({"a": [1.5]}), path)
        with open(path, "rb") as f:
            self.assertEqual(f.read(), b"a\n1.5\n")

        gz_path = path + ".gz"
        write_csv(pd.DataFrame({"a": [1.5]}), gz_path)
        with gzip.open(gz_path, "rt") as f:
            self.assertEqual(f.read(), "a\n1.5\n")

    def test_export_json(self):
        path = os.path.join(self.temp_dir.name, "report.json")
        export_json({"eigenvalues": [-1.5], "max_shift": float("nan")}, path)
        with open(path) as f:
            self.assertDictEqual(json.load(f), {"eigenvalues": [-1.5], "max_shift": None})

    def test_write_text(self):
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout):
            write_text("0 checks")
            write_text("done\n")
        self.assertEqual(stdout.getvalue(), "0 checks\ndone\n")
