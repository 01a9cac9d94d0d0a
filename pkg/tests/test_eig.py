import math
import unittest

import numpy as np
import scipy.sparse

from glt_spectra.eig import (
    BandedSymmetricMatrix,
    eigvals_gen_sym,
    eigvals_general,
    eigvals_sym,
    sturm_count,
)
from glt_spectra.errors import AsymmetryError, NotPositiveDefiniteError


def jacobi_eigenvalues(A, sweeps=50):
    """Cyclic Jacobi rotations; slow but independent of LAPACK."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(A ** 2) - np.sum(np.diag(A) ** 2))
        if off < 1e-14:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


class TestSymmetric(unittest.TestCase):

    def test_tridiagonal_closed_form(self):
        n = 99
        A = scipy.sparse.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1])
        result = eigvals_sym(A)
        self.assertEqual(result.method, "sturm-bisection")
        k = np.arange(1, n + 1)
        np.testing.assert_allclose(result.values, 2 - 2 * np.cos(k * math.pi / (n + 1)), atol=1e-12)

    def test_diagonal(self):
        result = eigvals_sym(np.diag([3.0, -1.0, 2.0]))
        self.assertEqual(result.method, "diagonal")
        np.testing.assert_array_equal(result.values, [-1.0, 2.0, 3.0])

    def test_random_dense_against_jacobi(self):
        rng = np.random.default_rng(7)
        B = rng.standard_normal((30, 30))
        A = B + B.T
        result = eigvals_sym(A)
        np.testing.assert_allclose(result.values, jacobi_eigenvalues(A), atol=1e-9)
        self.assertAlmostEqual(result.values.sum(), np.trace(A), places=10)

    def test_pentadiagonal_banded_path(self):
        n = 100
        A = (np.diag(np.full(n, 6.0)) + np.diag(np.full(n - 1, -4.0), 1) + np.diag(np.full(n - 1, -4.0), -1)
             + np.diag(np.ones(n - 2), 2) + np.diag(np.ones(n - 2), -2))
        result = eigvals_sym(A)
        self.assertEqual(result.method, "banded-tridiagonal")
        np.testing.assert_allclose(result.values, np.linalg.eigvalsh(A), atol=1e-11)

    def test_asymmetric_rejected(self):
        with self.assertRaises(AsymmetryError):
            eigvals_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_banded_storage(self):
        A = np.array([[4.0, 1.0, 0.0], [1.0, 5.0, 2.0], [0.0, 2.0, 6.0]])
        banded = BandedSymmetricMatrix.from_dense(A)
        self.assertEqual(banded.bw, 1)
        np.testing.assert_array_equal(banded.toarray(), A)
        self.assertEqual(banded.trace(), 15.0)
        self.assertEqual(banded.norm(), 8.0)


class TestSturmCount(unittest.TestCase):

    def test_matches_eigenvalues(self):
        rng = np.random.default_rng(3)
        d = rng.standard_normal(40)
        e = rng.standard_normal(39)
        values = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
        shifts = np.linspace(values[0] - 1, values[-1] + 1, 25)
        counts = sturm_count(d, e, shifts)
        np.testing.assert_array_equal(counts, np.searchsorted(values, shifts))
        self.assertTrue(np.all(np.diff(counts) >= 0))


class TestGeneralized(unittest.TestCase):

    def test_identity_mass(self):
        rng = np.random.default_rng(11)
        B = rng.standard_normal((12, 12))
        K = B + B.T
        np.testing.assert_allclose(eigvals_gen_sym(K, np.eye(12)).values, np.linalg.eigvalsh(K), atol=1e-12)

    def test_equal_pencil(self):
        n = 20
        M = np.diag(np.full(n, 4.0)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
        result = eigvals_gen_sym(M, M)
        self.assertEqual(result.method, "banded-cholesky-reduction")
        np.testing.assert_allclose(result.values, 1.0, atol=1e-12)

    def test_indefinite_mass(self):
        with self.assertRaises(NotPositiveDefiniteError):
            eigvals_gen_sym(np.eye(3), np.diag([1.0, -1.0, 1.0]))


class TestGeneral(unittest.TestCase):

    def test_rotation_has_imaginary_pair(self):
        result = eigvals_general(np.array([[0.0, -1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(result.values, [0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(result.imag, [-1.0, 1.0], atol=1e-15)
        self.assertAlmostEqual(result.max_imag, 1.0)

    def test_real_nonsymmetric(self):
        A = np.array([[2.0, 1.0], [0.5, 3.0]])
        result = eigvals_general(A)
        np.testing.assert_allclose(result.values, np.sort(np.linalg.eigvals(A).real), atol=1e-14)
        self.assertLess(result.max_imag, 1e-15)

    def test_agrees_with_symmetric_solver(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            with self.subTest(trial=trial):
                X = rng.standard_normal((50, 50))
                A = X + X.T
                general = eigvals_general(A)
                symmetric = eigvals_sym(A)
                scale = np.max(np.abs(symmetric.values))
                np.testing.assert_allclose(general.values, symmetric.values, atol=1e-11 * scale)
                self.assertLess(general.max_imag, 1e-10 * scale)


if __name__ == "__main__":
    unittest.main()
