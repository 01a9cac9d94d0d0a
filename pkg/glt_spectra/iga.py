"""B-spline machinery and isogeometric Galerkin assembly.

The discrete space uses degree-eta B-splines of maximal smoothness C^{eta-1}
on an open knot vector over [a, b] with n uniform interior breakpoints; the
first and last basis functions are removed to impose Dirichlet conditions,
leaving n + eta - 1 unknowns.
"""
from __future__ import annotations

import logging
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .eig import BandedSymmetricMatrix, SpectrumResult, eigvals_gen_sym
from .errors import ConfigError, NumericalError
from .grids import Diffeomorphism
from .problems import SLProblem

logger = logging.getLogger(__name__)

IGA_MAX_ETA = 10


###############################################################################
# Cardinal B-splines and the IgA symbol
###############################################################################

def cardinal_bspline(s: int, x) -> np.ndarray:
    """Cardinal B-spline psi_s of degree s, supported on [0, s+1]."""
    if s < 0:
        raise ConfigError(f"degree must be >= 0 (got {s})")
    x = np.asarray(x, dtype=float)
    shifted = [x - m for m in range(s + 1)]
    values = [((0.0 <= xm) & (xm < 1.0)).astype(float) for xm in shifted]
    for d in range(1, s + 1):
        values = [
            (shifted[m] * values[m] + (d + 1 - shifted[m]) * values[m + 1]) / d
            for m in range(s + 1 - d)
        ]
    return values[0]


def cardinal_bspline_d2(s: int, x) -> np.ndarray:
    """Second derivative of psi_s as a second difference of psi_{s-2}."""
    if s < 2:
        raise ConfigError(f"second derivative needs degree >= 2 (got {s})")
    x = np.asarray(x, dtype=float)
    return cardinal_bspline(s - 2, x) - 2.0 * cardinal_bspline(s - 2, x - 1.0) + cardinal_bspline(s - 2, x - 2.0)


def iga_symbol(eta: int) -> Callable[[np.ndarray], np.ndarray]:
    """theta -> g_eta(theta) / h_eta(theta), built from psi_{2 eta + 1} at integer offsets."""
    if not 1 <= eta <= IGA_MAX_ETA:
        raise ConfigError(f"eta must lie in [1, {IGA_MAX_ETA}] (got {eta})")
    s = 2 * eta + 1
    offsets = eta + 1 - np.arange(eta + 1)
    psi = cardinal_bspline(s, offsets)
    psi_d2 = cardinal_bspline_d2(s, offsets)
    k = np.arange(1, eta + 1)

    def f(theta):
        theta = np.asarray(theta, dtype=float)
        cos = np.cos(np.multiply.outer(theta, k))
        g = -psi_d2[0] - 2.0 * cos @ psi_d2[1:]
        h = psi[0] + 2.0 * cos @ psi[1:]
        return g / h

    f.eta = eta
    return f


def iga_closed_form(eta: int) -> Callable[[np.ndarray], np.ndarray]:
    """Rational closed forms of the IgA symbol for eta = 1..4."""
    def f1(t):
        return 6 * (1 - np.cos(t)) / (2 + np.cos(t))

    def f2(t):
        return 20 * (3 - 2 * np.cos(t) - np.cos(2 * t)) / (33 + 26 * np.cos(t) + np.cos(2 * t))

    def f3(t):
        return (42 * (40 - 15 * np.cos(t) - 24 * np.cos(2 * t) - np.cos(3 * t))
                / (1208 + 1191 * np.cos(t) + 120 * np.cos(2 * t) + np.cos(3 * t)))

    def f4(t):
        return (72 * (1225 - 154 * np.cos(t) - 952 * np.cos(2 * t) - 118 * np.cos(3 * t) - np.cos(4 * t))
                / (78095 + 88234 * np.cos(t) + 14608 * np.cos(2 * t) + 502 * np.cos(3 * t) + np.cos(4 * t)))

    forms = {1: f1, 2: f2, 3: f3, 4: f4}
    if eta not in forms:
        raise ConfigError(f"closed form only available for eta in 1..4 (got {eta})")
    return lambda theta: forms[eta](np.asarray(theta, dtype=float))


###############################################################################
# B-spline space
###############################################################################

class BSplineSpace:
    """Open knot vector on [a, b] with n uniform interior breakpoints."""

    def __init__(self, a: float, b: float, n: int, eta: int):
        if n < 1:
            raise ConfigError(f"n must be >= 1 (got {n})")
        if not 1 <= eta <= IGA_MAX_ETA:
            raise ConfigError(f"eta must lie in [1, {IGA_MAX_ETA}] (got {eta})")
        self.a = float(a)
        self.b = float(b)
        self.n = n
        self.eta = eta
        inner = a + (b - a) * np.arange(1, n + 1) / (n + 1)
        self.knots = np.concatenate([np.full(eta + 1, self.a), inner, np.full(eta + 1, self.b)])

    @property
    def num_functions(self) -> int:
        """Basis size including the two boundary functions."""
        return self.n + self.eta + 1

    @property
    def dim(self) -> int:
        return self.n + self.eta - 1

    @property
    def spans(self) -> np.ndarray:
        """Knot indices mu with [t_mu, t_{mu+1}) of positive length."""
        return np.arange(self.eta, self.eta + self.n + 1)

    def find_span(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mu = np.searchsorted(self.knots, x, side="right") - 1
        return np.clip(mu, self.eta, self.eta + self.n)

    def basis(self, x, span=None) -> Tuple[np.ndarray, np.ndarray]:
        """Values and first derivatives of the eta+1 functions active at x.

        Returns arrays of shape x.shape + (eta+1,); entry r belongs to basis
        function span - eta + r.
        """
        x = np.asarray(x, dtype=float)
        mu = self.find_span(x) if span is None else np.broadcast_to(np.asarray(span), x.shape)
        t = self.knots
        eta = self.eta

        N = [np.ones_like(x)]
        lower = N
        for j in range(1, eta + 1):
            left = [None] + [x - t[mu + 1 - i] for i in range(1, j + 1)]
            right = [None] + [t[mu + i] - x for i in range(1, j + 1)]
            saved = np.zeros_like(x)
            new = []
            for r in range(j):
                temp = N[r] / (right[r + 1] + left[j - r])
                new.append(saved + right[r + 1] * temp)
                saved = left[j - r] * temp
            new.append(saved)
            lower, N = N, new

        dN = []
        for r in range(eta + 1):
            i = mu - eta + r
            term = np.zeros_like(x)
            if r >= 1:
                den = t[i + eta] - t[i]
                term = term + np.divide(lower[r - 1], den, out=np.zeros_like(x), where=den != 0)
            if r <= eta - 1:
                den = t[i + eta + 1] - t[i + 1]
                term = term - np.divide(lower[r], den, out=np.zeros_like(x), where=den != 0)
            dN.append(eta * term)
        return np.stack(N, axis=-1), np.stack(dN, axis=-1)


###############################################################################
# Galerkin assembly
###############################################################################

class GalerkinPair:
    """Stiffness K and mass M, both symmetric with bandwidth eta."""

    def __init__(self, K: np.ndarray, M: np.ndarray, space: BSplineSpace):
        self.K = K
        self.M = M
        self.space = space

    @property
    def eta(self) -> int:
        return self.space.eta

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    def banded(self) -> Tuple[BandedSymmetricMatrix, BandedSymmetricMatrix]:
        bw = min(self.eta, self.dim - 1)
        return BandedSymmetricMatrix.from_dense(self.K, bw), BandedSymmetricMatrix.from_dense(self.M, bw)


class GeneralizedProblem:
    """Handle for K x = lambda M x; M^{-1} K is never formed."""

    def __init__(self, K, M):
        self.K = K
        self.M = M

    def eigvals(self) -> SpectrumResult:
        return eigvals_gen_sym(self.K, self.M)


def _symmetrize(A: np.ndarray) -> np.ndarray:
    upper = np.triu(A)
    return upper + np.triu(A, 1).T


def assemble_iga(prob: SLProblem, tau: Diffeomorphism, n: int, eta: int,
                 keep_boundary: bool = False) -> GalerkinPair:
    """Assemble K = [int p(tau)/|tau'| B_j' B_i'] and M = [int w(tau)|tau'| B_j B_i]."""
    if n < 2:
        raise ConfigError(f"iga needs n >= 2 (got {n})")
    if not prob.is_dirichlet:
        raise ConfigError("iga assembly supports Dirichlet conditions only")
    space = BSplineSpace(prob.a, prob.b, n, eta)
    probe = np.linspace(prob.a, prob.b, 257)
    if np.any(prob.q(probe) != 0):
        raise ConfigError("iga assembly supports q = 0 only")

    mu = space.spans
    lo, hi = space.knots[mu], space.knots[mu + 1]
    nodes, weights = leggauss(eta + 2)
    half = 0.5 * (hi - lo)
    x = 0.5 * (hi + lo)[:, None] + half[:, None] * nodes[None, :]
    qw = half[:, None] * weights[None, :]

    dtau = tau.derivative(x)
    if np.any(dtau == 0):
        raise NumericalError("tau' vanishes at a quadrature node")
    X = tau(x)
    ck = qw * prob.p(X) / np.abs(dtau)
    cm = qw * prob.w(X) * np.abs(dtau)

    N, dN = space.basis(x, np.broadcast_to(mu[:, None], x.shape))
    Ke = np.einsum("sq,sqi,sqj->sij", ck, dN, dN)
    Me = np.einsum("sq,sqi,sqj->sij", cm, N, N)

    size = space.num_functions
    idx = (mu - eta)[:, None] + np.arange(eta + 1)[None, :]
    rows = np.broadcast_to(idx[:, :, None], Ke.shape)
    cols = np.broadcast_to(idx[:, None, :], Ke.shape)
    K = np.zeros((size, size))
    M = np.zeros((size, size))
    np.add.at(K, (rows, cols), Ke)
    np.add.at(M, (rows, cols), Me)
    K, M = _symmetrize(K), _symmetrize(M)
    if not keep_boundary:
        K, M = K[1:-1, 1:-1], M[1:-1, 1:-1]
    logger.debug("Assembled IgA pair %s n=%d eta=%d dim=%d on %s", prob.name, n, eta, K.shape[0], tau.label)
    return GalerkinPair(K, M, space)


def iga_operator(pair: GalerkinPair) -> GeneralizedProblem:
    K, M = pair.banded()
    return GeneralizedProblem(K, M)
