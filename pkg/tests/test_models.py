import os
import unittest
from unittest.mock import patch

from pydantic import ValidationError

from glt_spectra.config import DEFAULT_MAX_N, DENSE_MAX_N, dense_max_n, max_n
from glt_spectra.models import ErrorReport, GridName, Method, ProblemName, RunConfig


class TestRunConfig(unittest.TestCase):

    def test_defaults(self):
        cfg = RunConfig()
        self.assertEqual(cfg.method, Method.FD)
        self.assertEqual(cfg.problem, ProblemName.EULER_CAUCHY)
        self.assertEqual(cfg.grid, GridName.UNIFORM)
        self.assertEqual((cfg.n, cfg.eta, cfg.r), (100, 1, 1000))

    def test_string_values_are_coerced(self):
        cfg = RunConfig(method="iga", grid="exp", eta=4)
        self.assertEqual(cfg.method, Method.IGA)
        self.assertEqual(cfg.grid, GridName.EXP)

    def test_rejected_combinations(self):
        bad = [
            {"alpha": 0.0},
            {"n": 3, "eta": 2},
            {"method": "iga", "eta": 11},
            {"method": "fd", "eta": 21, "n": 100},
            {"problem": "laplacian-1d", "grid": "exp"},
            {"problem": "l1-case", "eta": 2},
            {"problem": "laplace-2d", "n": 300},
            {"exact": True, "grid": "exp"},
            {"r": 1},
        ]
        for kwargs in bad:
            with self.subTest(**kwargs):
                with self.assertRaises(ValidationError):
                    RunConfig(**kwargs)

    def test_frozen(self):
        with self.assertRaises(ValidationError):
            RunConfig().n = 5


class TestErrorReport(unittest.TestCase):

    def test_lengths_must_agree(self):
        with self.assertRaises(ValidationError):
            ErrorReport(k=[1, 2], numerical_err=[0.1], analytic_err=[0.1, 0.2], max_err=0.1, argmax_k=1)


class TestSizeCaps(unittest.TestCase):

    def test_defaults(self):
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop("GLT_SPECTRA_MAX_N", None)
            self.assertEqual(max_n(), DEFAULT_MAX_N)
            self.assertEqual(dense_max_n(), DENSE_MAX_N)

    def test_override(self):
        with patch.dict(os.environ, {"GLT_SPECTRA_MAX_N": "20000"}):
            self.assertEqual(max_n(), 20000)
            self.assertEqual(dense_max_n(), 20000)
        with patch.dict(os.environ, {"GLT_SPECTRA_MAX_N": "100"}):
            self.assertEqual(max_n(), 100)
            self.assertEqual(dense_max_n(), DENSE_MAX_N)

    def test_bad_override_is_ignored(self):
        for raw in ("lots", "-3"):
            with self.subTest(raw=raw):
                with patch.dict(os.environ, {"GLT_SPECTRA_MAX_N": raw}):
                    with self.assertLogs("glt_spectra.config", level="WARNING"):
                        self.assertEqual(max_n(), DEFAULT_MAX_N)


if __name__ == "__main__":
    unittest.main()
