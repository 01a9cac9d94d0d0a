"""Eigenvalue solvers for the discretization matrices.

All dense and banded work is delegated to LAPACK through ``scipy.linalg``:

* symmetric tridiagonal: Sturm-sequence bisection (``?stebz``),
* symmetric banded: reduction to tridiagonal form (``?sbtrd``),
* generalized symmetric-definite: Cholesky reduction M = C C^T,
* general real: Hessenberg reduction and shifted QR (``?geev``).
"""
from __future__ import annotations

import logging
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse

from .config import TRIDIAGONAL_MAX_N, dense_max_n
from .errors import AsymmetryError, ConfigError, ConvergenceError, NotPositiveDefiniteError

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-12
EPS = np.finfo(float).eps


class BandedSymmetricMatrix:
    """Symmetric matrix stored by its lower bands: ``bands[k, j] = A[j + k, j]``."""

    def __init__(self, bands: np.ndarray):
        bands = np.atleast_2d(np.asarray(bands, dtype=float))
        self.bands = bands
        if self.bw >= max(self.n, 1) and self.n > 1:
            raise ConfigError(f"bandwidth {self.bw} must be smaller than n={self.n}")

    @property
    def n(self) -> int:
        return self.bands.shape[1]

    @property
    def bw(self) -> int:
        return self.bands.shape[0] - 1

    @classmethod
    def from_dense(cls, A: np.ndarray, bw: Optional[int] = None) -> "BandedSymmetricMatrix":
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        if bw is None:
            bw = _bandwidth(A)
        bands = np.zeros((bw + 1, n))
        for k in range(bw + 1):
            bands[k, :n - k] = np.diagonal(A, -k)
        return cls(bands)

    @classmethod
    def from_sparse(cls, A, bw: int) -> "BandedSymmetricMatrix":
        A = scipy.sparse.csr_matrix(A)
        n = A.shape[0]
        bw = min(bw, n - 1)
        bands = np.zeros((bw + 1, n))
        for k in range(bw + 1):
            bands[k, :n - k] = A.diagonal(-k)
        return cls(bands)

    def toarray(self) -> np.ndarray:
        n = self.n
        A = np.zeros((n, n))
        for k in range(self.bw + 1):
            idx = np.arange(n - k)
            A[idx + k, idx] = self.bands[k, :n - k]
            A[idx, idx + k] = self.bands[k, :n - k]
        return A

    def norm(self) -> float:
        """Infinity norm (maximum absolute row sum)."""
        n = self.n
        rows = np.abs(self.bands[0]).copy()
        for k in range(1, self.bw + 1):
            band = np.abs(self.bands[k, :n - k])
            rows[k:] += band
            rows[:n - k] += band
        return float(rows.max()) if n else 0.0

    def trace(self) -> float:
        return float(self.bands[0].sum())


class SpectrumResult:
    """Eigenvalues sorted ascending by real part.

    ``imag`` is None for symmetric solvers; ``residual_bound`` is an absolute
    backward-error bound n * eps * ||A||.
    """

    def __init__(self, values: np.ndarray, residual_bound: float, method: str,
                 imag: Optional[np.ndarray] = None):
        self.values = np.asarray(values, dtype=float)
        self.imag = None if imag is None else np.asarray(imag, dtype=float)
        self.residual_bound = float(residual_bound)
        self.method = method

    def __len__(self) -> int:
        return len(self.values)

    @property
    def max_imag(self) -> float:
        if self.imag is None or not len(self.imag):
            return 0.0
        return float(np.max(np.abs(self.imag)))

    def __repr__(self) -> str:
        return f"SpectrumResult(n={len(self)}, method={self.method}, residual_bound={self.residual_bound:.3g})"


MatrixLike = Union[np.ndarray, BandedSymmetricMatrix, scipy.sparse.spmatrix]


def _bandwidth(A: np.ndarray) -> int:
    rows, cols = np.nonzero(A)
    if not len(rows):
        return 0
    return int(np.max(np.abs(rows - cols)))


def _check_symmetric(A: np.ndarray) -> None:
    scale = np.max(np.abs(A)) if A.size else 0.0
    if scale and np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise AsymmetryError("matrix is not symmetric within 1e-12 relative")


def _as_banded_or_dense(A: MatrixLike) -> Union[BandedSymmetricMatrix, np.ndarray]:
    if isinstance(A, BandedSymmetricMatrix):
        return A
    if scipy.sparse.issparse(A):
        A = scipy.sparse.csr_matrix(A)
        diff = A - A.T
        scale = abs(A).max() if A.nnz else 0.0
        if scale and abs(diff).max() > SYMMETRY_RTOL * scale:
            raise AsymmetryError("matrix is not symmetric within 1e-12 relative")
        coo = A.tocoo()
        bw = int(np.max(np.abs(coo.row - coo.col))) if coo.nnz else 0
        return BandedSymmetricMatrix.from_sparse(A, bw)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {A.shape}")
    _check_symmetric(A)
    n = A.shape[0]
    bw = _bandwidth(A)
    if n > 1 and (bw <= 1 or 8 * bw < n):
        return BandedSymmetricMatrix.from_dense(A, bw)
    return A


def eigvals_sym(A: MatrixLike) -> SpectrumResult:
    """All eigenvalues of a real symmetric matrix, ascending."""
    A = _as_banded_or_dense(A)
    if isinstance(A, np.ndarray):
        n = A.shape[0]
        if n > dense_max_n():
            raise ConfigError(f"dense symmetric path limited to n <= {dense_max_n()} (got {n})")
        values = scipy.linalg.eigvalsh(A)
        norm = float(np.max(np.sum(np.abs(A), axis=1))) if n else 0.0
        return SpectrumResult(values, n * EPS * norm, "dense-symmetric")

    n, bw = A.n, A.bw
    norm = A.norm()
    if n > TRIDIAGONAL_MAX_N:
        raise ConfigError(f"banded path limited to n <= {TRIDIAGONAL_MAX_N} (got {n})")
    if bw == 0 or n == 1:
        values = np.sort(A.bands[0])
        method = "diagonal"
    elif bw == 1:
        values = scipy.linalg.eigh_tridiagonal(A.bands[0], A.bands[1, :-1], eigvals_only=True,
                                               lapack_driver="stebz")
        method = "sturm-bisection"
    elif 8 * bw < n:
        values = scipy.linalg.eigvals_banded(A.bands, lower=True)
        method = "banded-tridiagonal"
    else:
        if n > dense_max_n():
            raise ConfigError(f"dense symmetric path limited to n <= {dense_max_n()} (got {n})")
        values = scipy.linalg.eigvalsh(A.toarray())
        method = "dense-symmetric"
    logger.debug("eigvals_sym n=%d bw=%d via %s", n, bw, method)
    return SpectrumResult(np.sort(values), n * EPS * norm, method)


def sturm_count(d: np.ndarray, e: np.ndarray, shifts) -> np.ndarray:
    """Number of eigenvalues of tridiag(e, d, e) strictly below each shift.

    Counts negative pivots of the LDL^T factorization of T - shift*I.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    tiny = np.finfo(float).tiny
    scale = max(float(np.max(np.abs(d))) if len(d) else 0.0, float(np.max(np.abs(e))) if len(e) else 0.0, 1.0)
    count = np.zeros(shifts.shape, dtype=int)
    pivot = d[0] - shifts
    for i in range(len(d)):
        if i > 0:
            pivot = d[i] - shifts - e[i - 1] ** 2 / pivot
        pivot = np.where(pivot == 0, -tiny * scale, pivot)
        count += pivot < 0
    return count


def eigvals_gen_sym(K: MatrixLike, M: MatrixLike) -> SpectrumResult:
    """Eigenvalues of M^{-1} K for symmetric K and SPD M, through M = C C^T."""
    banded_m = M if isinstance(M, BandedSymmetricMatrix) else None
    Kd = K.toarray() if isinstance(K, BandedSymmetricMatrix) else (
        K.toarray() if scipy.sparse.issparse(K) else np.asarray(K, dtype=float))
    Md = M.toarray() if isinstance(M, BandedSymmetricMatrix) else (
        M.toarray() if scipy.sparse.issparse(M) else np.asarray(M, dtype=float))
    if Kd.shape != Md.shape:
        raise ConfigError(f"K and M shapes differ: {Kd.shape} vs {Md.shape}")
    _check_symmetric(Kd)
    _check_symmetric(Md)
    n = Kd.shape[0]
    if n > dense_max_n():
        raise ConfigError(f"generalized path limited to n <= {dense_max_n()} (got {n})")
    if banded_m is None:
        bw = _bandwidth(Md)
        if n > 1 and 8 * bw < n:
            banded_m = BandedSymmetricMatrix.from_dense(Md, bw)

    try:
        if banded_m is not None:
            C = scipy.linalg.cholesky_banded(banded_m.bands, lower=True)
            lu = (banded_m.bw, 0)
            Y = scipy.linalg.solve_banded(lu, C, Kd)
            Z = scipy.linalg.solve_banded(lu, C, Y.T)
            method = "banded-cholesky-reduction"
        else:
            C = scipy.linalg.cholesky(Md, lower=True)
            Y = scipy.linalg.solve_triangular(C, Kd, lower=True)
            Z = scipy.linalg.solve_triangular(C, Y.T, lower=True)
            method = "cholesky-reduction"
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"Cholesky factorization of M failed: {exc}") from exc

    Z = 0.5 * (Z + Z.T)
    values = scipy.linalg.eigvalsh(Z)
    norm = float(np.max(np.sum(np.abs(Z), axis=1))) if n else 0.0
    logger.debug("eigvals_gen_sym n=%d via %s", n, method)
    return SpectrumResult(values, n * EPS * norm, method)


def eigvals_general(A: np.ndarray) -> SpectrumResult:
    """All eigenvalues of a real square matrix, sorted by real part."""
    A = A.toarray() if scipy.sparse.issparse(A) else np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > dense_max_n():
        raise ConfigError(f"general eigensolver limited to n <= {dense_max_n()} (got {n})")
    try:
        values = scipy.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR iteration did not converge: {exc}") from exc
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    norm = float(np.max(np.sum(np.abs(A), axis=1))) if n else 0.0
    logger.debug("eigvals_general n=%d max|Im|=%.3g", n, float(np.max(np.abs(values.imag))) if n else 0.0)
    return SpectrumResult(values.real, n * EPS * norm, "hessenberg-qr", imag=values.imag)
