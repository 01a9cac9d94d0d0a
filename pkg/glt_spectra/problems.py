"""Sturm-Liouville problem instances, the Liouville normal form and reference spectra.

The model problem is

    -(p u')' + q u = lambda w u   on [a, b]

with separated boundary conditions ``sigma1 u(a) + sigma2 p(a) u'(a) = 0`` and
``zeta1 u(b) + zeta2 p(b) u'(b) = 0``.
"""
from __future__ import annotations

import logging
import math
import warnings
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import integrate, optimize

from .config import PROBE_POINTS
from .errors import ConfigError, ConvergenceError

logger = logging.getLogger(__name__)

ScalarField = Callable[[np.ndarray], np.ndarray]

QUAD_EPSREL = 1e-12
INVERSE_XTOL = 1e-13
DIFF_STEP = 1e-5


###############################################################################
# Exact spectra
###############################################################################

class ExactKind(str, Enum):
    EULER_CAUCHY = "euler-cauchy"
    DIRICHLET_LAPLACIAN_1D = "dirichlet-laplacian-1d"
    DIRICHLET_LAPLACIAN_2D = "dirichlet-laplacian-2d"


class ExactSpectrum:
    """Closed-form eigenvalues k -> lambda_k (k starting at 1)."""

    def __init__(self, kind: ExactKind, alpha: float = 0.0, length: float = 1.0):
        self.kind = kind
        self.alpha = float(alpha)
        self.length = float(length)

    def __call__(self, k) -> np.ndarray:
        k = np.asarray(k)
        if np.any(k < 1):
            raise ConfigError("eigenvalue indices start at 1")
        if self.kind == ExactKind.EULER_CAUCHY:
            return (k * math.pi) ** 2 + self.alpha / 4.0
        if self.kind == ExactKind.DIRICHLET_LAPLACIAN_1D:
            return (k * math.pi / self.length) ** 2
        values = self.first(int(np.max(k)))
        return values[k - 1]

    def first(self, k_max: int) -> np.ndarray:
        """The k_max smallest eigenvalues, ascending."""
        if k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if self.kind != ExactKind.DIRICHLET_LAPLACIAN_2D:
            return self(np.arange(1, k_max + 1))
        # every pair with i^2 + j^2 <= m^2 has i, j <= m
        m = int(math.ceil(math.sqrt(4.0 * k_max / math.pi))) + 1
        while True:
            i = np.arange(1, m + 1)
            sums = np.add.outer(i * i, i * i).ravel()
            if np.count_nonzero(sums <= m * m) >= k_max:
                break
            m += max(1, m // 8)
        return np.sort(sums)[:k_max] * math.pi ** 2

    def __repr__(self) -> str:
        return f"ExactSpectrum({self.kind.value}, alpha={self.alpha}, length={self.length})"


###############################################################################
# Problem and normal form records
###############################################################################

class SLProblem(BaseModel):
    """A regular Sturm-Liouville problem on [a, b].

    Coefficient callables take and return numpy arrays. ``w_prime`` may be
    omitted, in which case (w p)' is obtained by central differences.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "custom"
    a: float
    b: float
    p: ScalarField
    p_prime: ScalarField
    q: ScalarField
    w: ScalarField
    w_prime: Optional[ScalarField] = None
    bc: Tuple[float, float, float, float] = (1.0, 0.0, 1.0, 0.0)
    exact: Optional[ExactSpectrum] = None

    @model_validator(mode="after")
    def _check(self) -> "SLProblem":
        if not self.b > self.a:
            raise ValueError(f"need b > a (got a={self.a}, b={self.b})")
        s1, s2, z1, z2 = self.bc
        if s1 * s1 + s2 * s2 == 0 or z1 * z1 + z2 * z2 == 0:
            raise ValueError("boundary condition pairs must not vanish")
        probe = interior_probe(self.a, self.b)
        if not np.all(self.p(probe) > 0):
            raise ValueError("p must be positive on (a, b)")
        if not np.all(self.w(probe) > 0):
            raise ValueError("w must be positive on (a, b)")
        if np.any(self.q(probe) < 0):
            raise ValueError("q must be nonnegative on (a, b)")
        return self

    @property
    def is_dirichlet(self) -> bool:
        return self.bc[1] == 0 and self.bc[3] == 0

    def wp_prime(self, x: np.ndarray) -> np.ndarray:
        """Derivative of the product w*p."""
        x = np.asarray(x, dtype=float)
        if self.w_prime is not None:
            return self.w_prime(x) * self.p(x) + self.w(x) * self.p_prime(x)
        h = DIFF_STEP * (self.b - self.a)
        return (self.w(x + h) * self.p(x + h) - self.w(x - h) * self.p(x - h)) / (2 * h)


class NormalForm(BaseModel):
    """Liouville normal form -v'' + V v = lambda v on [0, B]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    B: float
    V: ScalarField
    Sigma: Tuple[float, float]
    Z: Tuple[float, float]
    x_of_y: ScalarField


def interior_probe(a: float, b: float, count: int = PROBE_POINTS) -> np.ndarray:
    return a + (b - a) * np.arange(1, count + 1) / (count + 1)


###############################################################################
# Problem instances
###############################################################################

def euler_cauchy(alpha: float) -> SLProblem:
    """-(alpha x^2 u')' = lambda u on [1, e^sqrt(alpha)], Dirichlet.

    Exact eigenvalues k^2 pi^2 + alpha/4.
    """
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive (got {alpha})")
    alpha = float(alpha)
    return SLProblem(
        name=f"euler-cauchy(alpha={alpha:g})",
        a=1.0,
        b=math.exp(math.sqrt(alpha)),
        p=lambda x: alpha * np.square(x),
        p_prime=lambda x: 2.0 * alpha * np.asarray(x, dtype=float),
        q=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        w=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        w_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        exact=ExactSpectrum(ExactKind.EULER_CAUCHY, alpha=alpha),
    )


def dirichlet_laplacian(a: float = 0.0, b: float = 1.0) -> SLProblem:
    """-u'' = lambda u on [a, b], Dirichlet."""
    return SLProblem(
        name="laplacian-1d",
        a=a,
        b=b,
        p=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        p_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        q=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        w=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        w_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        exact=ExactSpectrum(ExactKind.DIRICHLET_LAPLACIAN_1D, length=b - a),
    )


def _x_pow(x, power):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.power(x, power)


def l1_case() -> SLProblem:
    """-(x^(-1/2) u')' = lambda u on (0, 1), Dirichlet; p is only L^1."""
    return SLProblem(
        name="l1-case",
        a=0.0,
        b=1.0,
        p=lambda x: _x_pow(x, -0.5),
        p_prime=lambda x: -0.5 * _x_pow(x, -1.5),
        q=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        w=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        w_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )


###############################################################################
# Liouville transform
###############################################################################

def _quad(func, lo: float, hi: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(func, lo, hi, epsrel=QUAD_EPSREL, epsabs=0.0, limit=500)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"quadrature on [{lo}, {hi}] did not converge: {exc}") from exc
    return value


def liouville_transform(prob: SLProblem) -> NormalForm:
    """Map ``prob`` to normal form through y(x) = int_a^x sqrt(w/p)."""
    a, b = prob.a, prob.b
    nodes = np.linspace(a, b, PROBE_POINTS)
    if not (np.all(prob.p(nodes) > 0) and np.all(prob.w(nodes) > 0)):
        raise ConfigError(f"{prob.name}: p and w must be positive on [a, b]")
    if not (np.all(np.isfinite(prob.p(nodes))) and np.all(np.isfinite(prob.w(nodes)))):
        raise ConfigError(f"{prob.name}: coefficients must be finite on [a, b] (singular problem)")

    def s(x):
        return np.sqrt(prob.w(x) / prob.p(x))

    def y_of_x(x: float) -> float:
        return _quad(lambda t: float(s(t)), a, x)

    B = y_of_x(b)
    logger.debug("%s: B = %.15g", prob.name, B)

    def x_of_y_scalar(y: float) -> float:
        if y <= 0.0:
            return a
        if y >= B:
            return b
        return optimize.brentq(lambda x: y_of_x(x) - y, a, b, xtol=INVERSE_XTOL, rtol=4 * np.finfo(float).eps)

    def x_of_y(y):
        y = np.asarray(y, dtype=float)
        return np.vectorize(x_of_y_scalar, otypes=[float])(y)

    def G(x):
        return np.power(prob.w(x) * prob.p(x), 0.25)

    def D(x):
        # g'(y) expressed in x: G'(x) / s(x)
        G_prime = 0.25 * np.power(prob.w(x) * prob.p(x), -0.75) * prob.wp_prime(x)
        return G_prime / s(x)

    h = DIFF_STEP * (b - a)

    def D_prime(x):
        x = np.asarray(x, dtype=float)
        central = (D(x + h) - D(x - h)) / (2 * h)
        forward = (-3 * D(x) + 4 * D(x + h) - D(x + 2 * h)) / (2 * h)
        backward = (3 * D(x) - 4 * D(x - h) + D(x - 2 * h)) / (2 * h)
        out = np.where(x - h < a, forward, central)
        return np.where(x + h > b, backward, out)

    def V(y):
        x = x_of_y(y)
        return D_prime(x) / s(x) / G(x) + prob.q(x) / prob.w(x)

    s1, s2, z1, z2 = prob.bc
    wpa = float(prob.w(np.array(a)) * prob.p(np.array(a)))
    wpb = float(prob.w(np.array(b)) * prob.p(np.array(b)))
    pa, pb = float(prob.p(np.array(a))), float(prob.p(np.array(b)))
    wa, wb = float(prob.w(np.array(a))), float(prob.w(np.array(b)))
    dwpa, dwpb = float(prob.wp_prime(np.array(a))), float(prob.wp_prime(np.array(b)))
    Sigma = (
        s1 / wpa ** 0.25 + s2 * dwpa / (4 * pa ** 0.25 * wa ** 1.25),
        wpa ** 0.25 * s2,
    )
    Z = (
        z1 / wpb ** 0.25 - z2 * dwpb / (4 * pb ** 0.25 * wb ** 1.25),
        wpb ** 0.25 * z2,
    )
    return NormalForm(B=B, V=V, Sigma=Sigma, Z=Z, x_of_y=x_of_y)


def weyl_constant(prob: SLProblem) -> float:
    """Asymptotic lambda_n / n^2 = pi^2 / B^2."""
    B = liouville_transform(prob).B
    return math.pi ** 2 / B ** 2


###############################################################################
# Reference spectra
###############################################################################

def reference_spectrum(prob: SLProblem, k_max: int, mode: str = "exact",
                       n_fine: int = 10_000, eta: int = 1) -> np.ndarray:
    """First ``k_max`` reference eigenvalues, ascending.

    ``mode="exact"`` uses the closed form; ``mode="fine_fd"`` solves the FD
    discretization of size ``n_fine`` on the uniform grid.
    """
    if k_max < 1:
        raise ConfigError("k_max must be >= 1")
    if mode == "exact":
        if prob.exact is None:
            raise ConfigError(f"no exact spectrum known for {prob.name}")
        return prob.exact.first(k_max)
    if mode != "fine_fd":
        raise ConfigError(f"unknown reference mode {mode!r}")
    if n_fine < 10 * k_max:
        raise ConfigError(f"fine_fd needs n_fine >= 10*k_max (got {n_fine} < {10 * k_max})")

    from .fd import assemble_fd, fd_spectrum
    from .grids import identity_map

    system = assemble_fd(prob, identity_map(prob.a, prob.b), n_fine, eta)
    values = fd_spectrum(system).values
    logger.debug("%s: fine FD reference n'=%d eta=%d", prob.name, n_fine, eta)
    return values[:k_max]
