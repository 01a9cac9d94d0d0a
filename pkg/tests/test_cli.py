import io
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pandas as pd

from glt_spectra.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from glt_spectra.analysis import grid_map, solve_discrete
from glt_spectra.eig import SpectrumResult
from glt_spectra.errors import NumericalError
from glt_spectra.models import GridName, Method
from glt_spectra.problems import euler_cauchy


class TestCli(unittest.TestCase):

    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def _run(self, *argv):
        with patch("sys.stderr", new_callable=io.StringIO) as err:
            code = main(list(argv))
        return code, err.getvalue()

    def test_fd_spectrum(self):
        out = self.tmpdir / "spectrum.csv"
        code, _ = self._run("spectrum", "--method", "fd", "--problem", "euler-cauchy", "--alpha", "1",
                            "--n", "100", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        df = pd.read_csv(out)
        self.assertEqual(list(df.columns), ["k", "lambda_re", "lambda_im"])
        self.assertEqual(len(df), 100)
        self.assertTrue(np.all(np.diff(df["lambda_re"]) >= 0))
        self.assertLess(abs(df["lambda_re"].iloc[0] / (np.pi ** 2 + 0.25) - 1.0), 1e-3)

    def test_iga_spectrum_dimension(self):
        out = self.tmpdir / "iga.csv"
        code, _ = self._run("spectrum", "--method", "iga", "--eta", "3", "--n", "50", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(pd.read_csv(out)), 52)

    def test_laplace_2d_spectrum(self):
        out = self.tmpdir / "laplace.csv"
        code, _ = self._run("spectrum", "--problem", "laplace-2d", "--n", "8", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(pd.read_csv(out)), 64)

    def test_rearrange_exact_and_approximate(self):
        exact_out = self.tmpdir / "exact.csv"
        approx_out = self.tmpdir / "approx.csv"
        self.assertEqual(self._run("rearrange", "--exact", "--n", "100", "--out", str(exact_out))[0], EXIT_OK)
        self.assertEqual(self._run("rearrange", "--r", "1000", "--n", "100", "--out", str(approx_out))[0], EXIT_OK)
        exact = pd.read_csv(exact_out)
        approx = pd.read_csv(approx_out)
        self.assertEqual(list(exact.columns), ["x", "omega_tilde"])
        self.assertEqual(len(exact), 100)
        self.assertTrue(np.all(np.diff(exact["omega_tilde"]) >= 0))
        self.assertLess(np.max(np.abs(exact["omega_tilde"] - approx["omega_tilde"])), 5e-2)

    def test_dump_dir(self):
        dump = self.tmpdir / "dump"
        code, _ = self._run("spectrum", "--n", "10", "--eta", "2", "--out", str(self.tmpdir / "s.csv"),
                            "--dump-dir", str(dump))
        self.assertEqual(code, EXIT_OK)
        grid = pd.read_csv(dump / "grid.csv")
        self.assertEqual(grid["j"].tolist(), list(range(-1, 13)))
        matrix = pd.read_csv(dump / "matrix.csv")
        self.assertEqual(list(matrix.columns), ["i", "j", "value"])
        self.assertEqual(len(matrix), 10 * 5 - 6)

    def test_iga_dump_dir(self):
        dump = self.tmpdir / "dump"
        code, _ = self._run("spectrum", "--method", "iga", "--n", "10", "--eta", "2", "--dump-dir", str(dump),
                            "--out", str(self.tmpdir / "s.csv"))
        self.assertEqual(code, EXIT_OK)
        self.assertTrue((dump / "stiffness.csv").exists())
        self.assertTrue((dump / "mass.csv").exists())

    def test_error_report(self):
        out = self.tmpdir / "errors.csv"
        code, _ = self._run("errors", "--n", "100", "--r", "500", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        df = pd.read_csv(out)
        self.assertEqual(list(df.columns), ["k", "err_num", "err_analytic"])
        self.assertEqual(len(df), 100)
        self.assertEqual(df["k"].tolist(), list(range(1, 101)))
        self.assertTrue((df["err_num"] >= 0).all())

    def test_exponential_grid_spectrum_keeps_imaginary_parts(self):
        out = self.tmpdir / "exp.csv"
        code, _ = self._run("spectrum", "--grid", "exp", "--n", "50", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        prob = euler_cauchy(1.0)
        result = solve_discrete(prob, grid_map(prob, GridName.EXP, 1.0), Method.FD, 50, 1)
        self.assertEqual(result.method, "hessenberg-qr")
        df = pd.read_csv(out)
        np.testing.assert_allclose(df["lambda_re"], result.values, rtol=1e-12)
        np.testing.assert_allclose(df["lambda_im"], result.imag, atol=1e-12)

    def test_spectrum_writes_solver_imaginary_parts(self):
        out = self.tmpdir / "complex.csv"
        fake = SpectrumResult(np.array([1.0, 1.0, 2.0]), 0.0, "hessenberg-qr", imag=np.array([-0.25, 0.25, 0.0]))
        with patch("glt_spectra.cli.solve_discrete", return_value=fake):
            code, _ = self._run("spectrum", "--grid", "exp", "--n", "3", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(pd.read_csv(out)["lambda_im"].tolist(), [-0.25, 0.25, 0.0])

    def test_error_report_with_gap_series(self):
        gap_out = self.tmpdir / "gap.csv"
        code, _ = self._run("errors", "--n", "100", "--r", "500", "--out", str(self.tmpdir / "e.csv"),
                            "--gap-out", str(gap_out))
        self.assertEqual(code, EXIT_OK)
        gap = pd.read_csv(gap_out)
        self.assertEqual(list(gap.columns), ["x", "gap"])
        self.assertEqual(len(gap), 1000)
        self.assertTrue(np.all(np.diff(gap["x"]) > 0))
        self.assertAlmostEqual(gap["x"].iloc[int(gap["gap"].idxmax())], 0.668, delta=0.02)

    def test_error_report_needs_closed_form(self):
        code, _ = self._run("errors", "--problem", "l1-case", "--n", "50")
        self.assertEqual(code, EXIT_CONFIG)

    def test_invalid_size(self):
        code, err = self._run("spectrum", "--n", "0")
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("configuration error", err)

    def test_exact_needs_three_point_scheme(self):
        code, _ = self._run("rearrange", "--exact", "--method", "iga")
        self.assertEqual(code, EXIT_CONFIG)

    def test_exponential_grid_needs_euler_cauchy(self):
        code, _ = self._run("spectrum", "--problem", "l1-case", "--grid", "exp")
        self.assertEqual(code, EXIT_CONFIG)

    def test_unknown_table(self):
        code, _ = self._run("table", "42", "--out", str(self.tmpdir))
        self.assertEqual(code, EXIT_CONFIG)

    def test_bad_job_count(self):
        code, _ = self._run("figure", "l1-distribution", "--jobs", "0", "--out", str(self.tmpdir))
        self.assertEqual(code, EXIT_CONFIG)

    def test_numerical_failure_exit_code(self):
        with patch("glt_spectra.cli.run_table", side_effect=NumericalError("boom")):
            code, err = self._run("table", "1", "--out", str(self.tmpdir))
        self.assertEqual(code, EXIT_NUMERICAL)
        self.assertIn("boom", err)

    def test_table_writes_csv(self):
        code, _ = self._run("table", "1", "--out", str(self.tmpdir), "--jobs", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(pd.read_csv(self.tmpdir / "table-alpha-limit.csv")), 4)

    def test_figure_writes_csv(self):
        code, _ = self._run("figure", "eig-symbol-comparison", "--out", str(self.tmpdir))
        self.assertEqual(code, EXIT_OK)
        df = pd.read_csv(self.tmpdir / "figure-eig-symbol-comparison.csv")
        self.assertEqual(len(df), 100)
        self.assertEqual(set(df["series"]), {"alpha=1"})
        self.assertTrue((self.tmpdir / "provenance.txt").exists())


if __name__ == "__main__":
    unittest.main()
