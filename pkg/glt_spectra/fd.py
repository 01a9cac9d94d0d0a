"""(2 eta + 1)-point central finite differences on mapped grids."""
from __future__ import annotations

import logging
from typing import Callable

import numpy as np
import scipy.sparse
from numpy.lib.stride_tricks import sliding_window_view

from .eig import BandedSymmetricMatrix, SpectrumResult, eigvals_general, eigvals_sym
from .errors import ConfigError, GridError
from .grids import Diffeomorphism, ExtendedGrid, mapped_grid, uniform_grid
from .problems import SLProblem

logger = logging.getLogger(__name__)

FD_MAX_ETA = 20
SYMMETRY_RTOL = 1e-12
SYMMETRY_NOISE_FACTOR = 32.0


class FDCoefficients:
    """Stencil weights d_{eta,0} ... d_{eta,eta} of the symbol f_eta."""

    def __init__(self, eta: int, d: np.ndarray):
        self.eta = eta
        self.d = np.asarray(d, dtype=float)
        self.d.setflags(write=False)

    def __getitem__(self, k: int) -> float:
        return float(self.d[k])

    def __repr__(self) -> str:
        return f"FDCoefficients(eta={self.eta}, d={self.d.tolist()})"


def fd_coefficients(eta: int) -> FDCoefficients:
    """d_{eta,k} = (-1)^k (eta! eta!)/((eta-k)!(eta+k)!) 2/k^2, d_{eta,0} = -2 sum_k d_{eta,k}."""
    if not 1 <= eta <= FD_MAX_ETA:
        raise ConfigError(f"eta must lie in [1, {FD_MAX_ETA}] (got {eta})")
    d = np.zeros(eta + 1)
    ratio = 1.0
    for k in range(1, eta + 1):
        ratio *= (eta - k + 1) / (eta + k)
        d[k] = (-1) ** k * ratio * 2.0 / k ** 2
    d[0] = -2.0 * d[1:].sum()
    return FDCoefficients(eta, d)


def fd_symbol(eta: int) -> Callable[[np.ndarray], np.ndarray]:
    """theta -> d_0 + 2 sum_k d_k cos(k theta) on [0, pi]."""
    coeffs = fd_coefficients(eta)
    k = np.arange(1, eta + 1)

    def f(theta):
        theta = np.asarray(theta, dtype=float)
        return coeffs.d[0] + 2.0 * np.cos(np.multiply.outer(theta, k)) @ coeffs.d[1:]

    f.eta = eta
    return f


class FDSystem:
    """Discrete operator pieces: W^{-1}(L + Q) approximates the SL operator."""

    def __init__(self, L: scipy.sparse.csr_matrix, q: np.ndarray, w: np.ndarray, grid: ExtendedGrid):
        self.L = L
        self.q = np.asarray(q, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.grid = grid

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def eta(self) -> int:
        return self.grid.eta

    @property
    def Q(self) -> scipy.sparse.dia_matrix:
        return scipy.sparse.diags(self.q)

    @property
    def W(self) -> scipy.sparse.dia_matrix:
        return scipy.sparse.diags(self.w)


class DiscreteOperator:
    """Matrix whose eigenvalues are those of W^{-1}(L + Q).

    ``symmetric`` marks the scaled form W^{-1/2}(L + Q)W^{-1/2}.
    """

    def __init__(self, matrix: scipy.sparse.csr_matrix, symmetric: bool, bandwidth: int):
        self.matrix = matrix
        self.symmetric = symmetric
        self.bandwidth = bandwidth

    @property
    def shape(self):
        return self.matrix.shape


def _stencil_weights(grid: ExtendedGrid, p_bar: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Entries l_{i,j} for every interior row i and stencil column j, shape (n, 2 eta + 1).

    Column eta (the diagonal) holds -sum of the other columns, ghost columns included.
    """
    eta = grid.eta
    X = sliding_window_view(grid.nodes, 2 * eta + 1)  # row i: x_{i-eta} .. x_{i+eta}
    centre = X[:, eta:eta + 1]
    D = X - centre
    weights = np.zeros_like(X)
    cols = np.arange(2 * eta + 1)
    for c in cols:
        if c == eta:
            continue
        rest = (cols != eta) & (cols != c)
        xj = X[:, c:c + 1]
        D_rest = D[:, rest]
        # sum_m prod_{k != m} D_k = prod(D) * sum(1/D) over the remaining stencil
        factor = np.prod(D_rest / (X[:, rest] - xj), axis=1) * np.sum(1.0 / D_rest, axis=1)
        mid = 0.5 * (X[:, c] + centre[:, 0])
        p_mid = p_bar(mid)
        if np.any(~(p_mid > 0)):
            raise GridError("p must be positive at every stencil midpoint")
        weights[:, c] = 2.0 * p_mid * factor / D[:, c]
    weights[:, eta] = -np.sum(np.delete(weights, eta, axis=1), axis=1)
    return weights


def assemble_fd(prob: SLProblem, tau: Diffeomorphism, n: int, eta: int) -> FDSystem:
    """Assemble the central FD discretization of ``prob`` on the tau-mapped grid (Dirichlet)."""
    if n < 2 * eta:
        raise ConfigError(f"need n >= 2*eta (got n={n}, eta={eta})")
    if not 1 <= eta <= FD_MAX_ETA:
        raise ConfigError(f"eta must lie in [1, {FD_MAX_ETA}] (got {eta})")
    grid = mapped_grid(uniform_grid(prob.a, prob.b, n, eta), tau)
    if np.any(np.diff(grid.nodes) <= 0):
        raise GridError("degenerate grid (coincident nodes)")

    def p_bar(x):
        return prob.p(np.clip(x, prob.a, prob.b))

    weights = _stencil_weights(grid, p_bar)
    rows = np.repeat(np.arange(n), 2 * eta + 1)
    cols = (np.arange(n)[:, None] + np.arange(-eta, eta + 1)[None, :]).ravel()
    vals = weights.ravel()
    keep = (cols >= 0) & (cols < n)
    L = scipy.sparse.csr_matrix((vals[keep], (rows[keep], cols[keep])), shape=(n, n))

    interior = grid.interior
    q = prob.q(interior)
    w = prob.w(interior)
    if np.any(~(w > 0)):
        raise ConfigError("w must be positive at the grid nodes")
    if np.any(q < 0):
        raise ConfigError("q must be nonnegative at the grid nodes")
    logger.debug("Assembled FD system %s n=%d eta=%d on %s", prob.name, n, eta, tau.label)
    return FDSystem(L, q, w, grid)


def _is_symmetric(A: scipy.sparse.csr_matrix, eta: int) -> bool:
    scale = abs(A).max()
    if scale == 0:
        return True
    # node differences of size h carry eps / h relative rounding, about n eps
    tol = max(SYMMETRY_RTOL, SYMMETRY_NOISE_FACTOR * eta * A.shape[0] * np.finfo(float).eps)
    return abs(A - A.T).max() <= tol * scale


def fd_operator(system: FDSystem) -> DiscreteOperator:
    """Symmetric scaled form when L + Q is symmetric, W^{-1}(L + Q) otherwise."""
    A = (system.L + system.Q).tocsr()
    if _is_symmetric(A, system.eta):
        A = 0.5 * (A + A.T)
        s = scipy.sparse.diags(1.0 / np.sqrt(system.w))
        return DiscreteOperator((s @ A @ s).tocsr(), symmetric=True, bandwidth=system.eta)
    return DiscreteOperator((scipy.sparse.diags(1.0 / system.w) @ A).tocsr(),
                            symmetric=False, bandwidth=system.eta)


def operator_spectrum(op: DiscreteOperator) -> SpectrumResult:
    if op.symmetric:
        return eigvals_sym(BandedSymmetricMatrix.from_sparse(op.matrix, op.bandwidth))
    return eigvals_general(op.matrix.toarray())


def fd_spectrum(system: FDSystem) -> SpectrumResult:
    return operator_spectrum(fd_operator(system))
