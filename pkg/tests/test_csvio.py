import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from glt_spectra.csvio import gap_frame, grid_frame, matrix_frame, records_frame, spectrum_frame, write_frame
from glt_spectra.eig import SpectrumResult
from glt_spectra.grids import uniform_grid
from glt_spectra.models import GapReport, GridName, Laplace2DStats, Method, NecessaryConditionRow


class TestFrames(unittest.TestCase):

    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_matrix_triplets_are_one_based_row_major(self):
        A = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])
        df = matrix_frame(A)
        self.assertEqual(len(df), 7)
        self.assertEqual(list(zip(df["i"], df["j"]))[:3], [(1, 1), (1, 2), (2, 1)])
        self.assertEqual(df["value"].iloc[-1], 2.0)

    def test_grid_labels(self):
        df = grid_frame(uniform_grid(0.0, 1.0, 3, 2))
        self.assertEqual(df["j"].tolist(), [-1, 0, 1, 2, 3, 4, 5])

    def test_spectrum_with_imaginary_parts(self):
        result = SpectrumResult(np.array([1.0, 1.0]), 0.0, "hessenberg-qr", imag=np.array([-0.5, 0.5]))
        df = spectrum_frame(result)
        self.assertEqual(df["k"].tolist(), [1, 2])
        self.assertEqual(df["lambda_im"].tolist(), [-0.5, 0.5])

    def test_records_dump_enum_values(self):
        row = NecessaryConditionRow(method=Method.IGA, grid=GridName.EXP, eta=4, alpha=1.0, n=100, r=100,
                                    max_err=0.05, gap=0.04, ratio_minus_one=0.25, kbar_over_n=0.9,
                                    gap_argmax_x=0.99)
        df = records_frame([row, Laplace2DStats(n=8, max_rel_err=0.5, bound=0.59)], columns=["method", "n"])
        self.assertEqual(df["method"].iloc[0], "iga")
        self.assertEqual(df["n"].tolist(), [100, 8])

    def test_gap_series(self):
        report = GapReport(gap=0.3, argmax_x=0.5, grid=2, x=[0.25, 0.5], series=[0.1, 0.3])
        df = gap_frame(report)
        self.assertEqual(list(df.columns), ["x", "gap"])
        self.assertEqual(df["gap"].tolist(), [0.1, 0.3])

    def test_gap_series_must_align(self):
        with self.assertRaises(ValueError):
            GapReport(gap=0.3, argmax_x=0.5, grid=2, x=[0.25, 0.5], series=[0.1])

    def test_full_precision(self):
        path = write_frame(pd.DataFrame({"v": [1.0 / 3.0]}), self.tmpdir / "nested" / "v.csv")
        self.assertEqual(pd.read_csv(path)["v"].iloc[0], 1.0 / 3.0)


if __name__ == "__main__":
    unittest.main()
