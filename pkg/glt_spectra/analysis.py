"""Relative-error functionals, the saturation constant and the necessary-condition gap."""
from __future__ import annotations

import logging
import math
from functools import partial
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .config import DEFAULT_OUTLIER_EPS, GAP_GRID_N, L1_THETA_REFINE
from .eig import SpectrumResult
from .errors import ConfigError, NumericalError
from .fd import assemble_fd, fd_spectrum
from .grids import Diffeomorphism, exp_map, identity_map
from .iga import assemble_iga, iga_operator
from .models import (
    AttractionReport,
    ErrorReport,
    GapReport,
    GridName,
    L1CaseStats,
    Laplace2DStats,
    Method,
    NecessaryConditionRow,
)
from .problems import SLProblem, euler_cauchy, l1_case, liouville_transform
from .symbol import (
    MonotoneRearrangement,
    SeparableSymbol,
    counting_function,
    discretization_symbol,
    euler_cauchy_omega,
    is_outlier,
    rearrange,
    sample_rearrangement,
)

logger = logging.getLogger(__name__)

Rearrangement = Union[MonotoneRearrangement, Callable[[np.ndarray], np.ndarray]]

LAPLACE_2D_BOUND = 1.0 - 4.0 / math.pi ** 2
GERSHGORIN_FACTOR = math.sqrt(2.0) * (1.0 + 2.0 / math.sqrt(3.0))


###############################################################################
# Discrete spectra
###############################################################################

def grid_map(prob: SLProblem, grid: GridName, alpha: Optional[float] = None) -> Diffeomorphism:
    if grid == GridName.EXP:
        if alpha is None:
            raise ConfigError("grid=exp needs alpha")
        return exp_map(alpha)
    return identity_map(prob.a, prob.b)


def solve_discrete(prob: SLProblem, tau: Diffeomorphism, method: Method, n: int, eta: int) -> SpectrumResult:
    """Spectrum of the FD operator or of the IgA pencil, imaginary parts included."""
    method = Method(method)
    if method == Method.FD:
        result = fd_spectrum(assemble_fd(prob, tau, n, eta))
        if result.imag is not None and result.max_imag > 1e-8 * max(1.0, float(np.max(np.abs(result.values)))):
            logger.warning("%s: max |Im lambda| = %.3g on %s", prob.name, result.max_imag, tau.label)
        return result
    return iga_operator(assemble_iga(prob, tau, n, eta)).eigvals()


def discrete_spectrum(prob: SLProblem, tau: Diffeomorphism, method: Method, n: int, eta: int) -> np.ndarray:
    """Ascending real eigenvalues of the FD operator or of the IgA pencil."""
    return solve_discrete(prob, tau, method, n, eta).values


def weighted(values, n: int) -> np.ndarray:
    """lambda / (n+1)^2, the scale on which the symbol is sampled."""
    return np.asarray(values, dtype=float) / (n + 1.0) ** 2


###############################################################################
# Error functionals
###############################################################################

def saturation_constant(alpha: float, k) -> np.ndarray:
    """(alpha/4) / (k^2 pi^2 + alpha/4)."""
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive (got {alpha})")
    k = np.asarray(k, dtype=float)
    if np.any(k < 1):
        raise ConfigError("k must be >= 1")
    quarter = alpha / 4.0
    return quarter / (k * k * math.pi ** 2 + quarter)


def relative_errors(discrete, reference, rearr: Rearrangement, n: int) -> ErrorReport:
    """Numerical and analytic relative errors per index.

    ``discrete`` may hold more than ``n`` values (IgA pencils); the analytic
    error samples rearr at k/(m+1) for its length m, scaled by (n+1)^2.
    """
    discrete = np.asarray(discrete, dtype=float)
    reference = np.asarray(reference, dtype=float)
    m = len(discrete)
    if len(reference) < m:
        raise ConfigError(f"need at least {m} reference eigenvalues (got {len(reference)})")
    reference = reference[:m]
    if np.any(reference == 0):
        raise NumericalError("zero reference eigenvalue")
    k = np.arange(1, m + 1)
    numerical = np.abs(discrete / reference - 1.0)
    analytic = np.abs((n + 1.0) ** 2 * rearr(k / (m + 1.0)) / reference - 1.0)
    i = int(np.argmax(numerical))
    return ErrorReport(
        k=k.tolist(),
        numerical_err=numerical.tolist(),
        analytic_err=analytic.tolist(),
        max_err=float(numerical[i]),
        argmax_k=i + 1,
    )


def max_relative_error(discrete, reference, exclude_outliers: bool = False,
                       sym: Optional[SeparableSymbol] = None, n: Optional[int] = None,
                       eps: float = DEFAULT_OUTLIER_EPS) -> Tuple[float, int]:
    """max_k |lambda_k^(n)/lambda_k - 1| and its 1-based index.

    Outliers are judged on lambda/(n+1)^2 against the essential range of ``sym``.
    """
    discrete = np.asarray(discrete, dtype=float)
    reference = np.asarray(reference, dtype=float)[:len(discrete)]
    if len(reference) < len(discrete):
        raise ConfigError("reference spectrum is shorter than the discrete one")
    errors = np.abs(discrete / reference - 1.0)
    if exclude_outliers:
        if sym is None:
            raise ConfigError("outlier exclusion needs the symbol")
        n = len(discrete) if n is None else n
        mask = is_outlier(weighted(discrete, n), sym, eps)
        if mask.all():
            raise NumericalError("every eigenvalue was classified as an outlier")
        errors = np.where(mask, -np.inf, errors)
    i = int(np.argmax(errors))
    return float(errors[i]), i + 1


def count_outliers(discrete, sym: SeparableSymbol, n: int, eps: float = DEFAULT_OUTLIER_EPS) -> int:
    return int(np.count_nonzero(is_outlier(weighted(discrete, n), sym, eps)))


def necessary_condition_gap(rearr: Rearrangement, B: float, grid_n: int = GAP_GRID_N) -> GapReport:
    """max over x = k/(grid_n+1) of |rearr(x) B^2 / (x^2 pi^2) - 1|."""
    if not B > 0:
        raise ConfigError(f"B must be positive (got {B})")
    if grid_n < 1:
        raise ConfigError(f"grid_n must be >= 1 (got {grid_n})")
    x = np.arange(1, grid_n + 1) / (grid_n + 1.0)
    gaps = np.abs(rearr(x) * B * B / (x * x * math.pi ** 2) - 1.0)
    i = int(np.argmax(gaps))
    return GapReport(gap=float(gaps[i]), argmax_x=float(x[i]), grid=grid_n, x=x.tolist(), series=gaps.tolist())


###############################################################################
# Euler-Cauchy reports
###############################################################################

def attraction_report(alpha: float, n: int, r: Optional[int] = None) -> AttractionReport:
    """Top-index analytic error and the distance of (n+1)^2 lambda_n^(n)/lambda_n from max omega / pi^2."""
    r = n if r is None else r
    prob = euler_cauchy(alpha)
    tau = identity_map(prob.a, prob.b)
    values = discrete_spectrum(prob, tau, Method.FD, n, 1)
    exact_n = float(prob.exact(n))
    rearr = rearrange(discretization_symbol(prob, tau, "fd", 1), r)
    analytic = abs((n + 1.0) ** 2 * float(rearr(n / (n + 1.0))) / exact_n - 1.0)
    top = rearr.max_value
    gap = abs((values[-1] / exact_n) / (top / math.pi ** 2) - 1.0)
    return AttractionReport(alpha=alpha, n=n, r=r, analytic_err_n=analytic, attraction_gap=gap)


def necessary_condition_check(method: Method, grid: GridName, eta: int, alpha: float, n: int,
                              r: Optional[int] = None, exact: bool = False,
                              exclude_outliers: Optional[bool] = None) -> NecessaryConditionRow:
    """Compare the limit gap of the rearranged symbol with the observed maximum relative error."""
    method = Method(method)
    grid = GridName(grid)
    r = n if r is None else r
    if exclude_outliers is None:
        exclude_outliers = method == Method.IGA
    prob = euler_cauchy(alpha)
    tau = grid_map(prob, grid, alpha)
    sym = discretization_symbol(prob, tau, method.value, eta)
    if exact:
        if method != Method.FD or eta != 1 or grid != GridName.UNIFORM:
            raise ConfigError("the exact rearrangement covers fd, eta=1, uniform grid only")
        rearr: Rearrangement = partial(euler_cauchy_omega, alpha)
    else:
        rearr = rearrange(sym, r)
    B = liouville_transform(prob).B
    gap = necessary_condition_gap(rearr, B)

    values = discrete_spectrum(prob, tau, method, n, eta)
    reference = prob.exact.first(len(values))
    max_err, argmax_k = max_relative_error(values, reference, exclude_outliers, sym, n)
    outliers = count_outliers(values, sym, n) if exclude_outliers else 0
    logger.debug("necessary check %s/%s eta=%d alpha=%g n=%d: max=%.6g gap=%.6g",
                 method.value, grid.value, eta, alpha, n, max_err, gap.gap)
    return NecessaryConditionRow(
        method=method, grid=grid, eta=eta, alpha=alpha, n=n, r=r,
        max_err=max_err, gap=gap.gap, ratio_minus_one=abs(max_err / gap.gap - 1.0) if gap.gap else math.inf,
        kbar_over_n=argmax_k / n, gap_argmax_x=gap.argmax_x, outliers=outliers,
    )


###############################################################################
# L^1 coefficient and 2-D Laplacian
###############################################################################

def l1_case_stats(n: int, r: Optional[int] = None, theta_refine: int = L1_THETA_REFINE) -> L1CaseStats:
    """Statistics of the 3-point FD scheme for -(x^(-1/2) u')' = lambda u, weighted spectra.

    The rearrangement oversamples theta by ``theta_refine``: with r x r nodes the
    r-th smallest sample is sqrt(17) pi^2 / (r+1)^2 against a true quantile of
    (5 pi / 4)^2 / (r+1)^2, which would dominate the relative error at k=1.
    The largest sample still lands on x = n/(n+1).
    """
    if n < 10:
        raise ConfigError(f"l1-case needs n >= 10 (got {n})")
    r = n if r is None else r
    prob = l1_case()
    tau = identity_map(prob.a, prob.b)
    lam = weighted(discrete_spectrum(prob, tau, Method.FD, n, 1), n)
    sym = discretization_symbol(prob, tau, "fd", 1)
    samples = sample_rearrangement(rearrange(sym, r, theta_refine), n)
    root = math.sqrt(n + 1.0)
    return L1CaseStats(
        n=n,
        r=r,
        theta_refine=theta_refine,
        sup_abs_err=float(np.max(np.abs(samples - lam))),
        max_analytic_rel_err=float(np.max(np.abs(samples / lam - 1.0))),
        tail_ratio=float(samples[-1]) / root,
        eig_ratio=float(lam[-1]) / root,
        mean_eig=float(np.mean(lam)),
        gershgorin_bound=GERSHGORIN_FACTOR * root,
    )


def laplace2d_spectra(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted 5-point discrete and continuous Dirichlet eigenvalues on the unit square, i, j <= n."""
    if not 1 <= n <= 256:
        raise ConfigError(f"laplace-2d needs 1 <= n <= 256 (got {n})")
    i = np.arange(1, n + 1)
    one_d = 2.0 - 2.0 * np.cos(i * math.pi / (n + 1))
    discrete = (n + 1.0) ** 2 * np.add.outer(one_d, one_d).ravel()
    continuous = math.pi ** 2 * np.add.outer(i * i, i * i).ravel().astype(float)
    return np.sort(discrete), np.sort(continuous)


def laplace2d_gap(n: int) -> Laplace2DStats:
    discrete, continuous = laplace2d_spectra(n)
    return Laplace2DStats(n=n, max_rel_err=float(np.max(np.abs(discrete / continuous - 1.0))),
                          bound=LAPLACE_2D_BOUND)


###############################################################################
# Weyl law
###############################################################################

def weyl_consistency(n: int, alpha: float = 1.0, xs=(0.25, 0.5, 0.75)) -> np.ndarray:
    """Counting function of the weighted FD spectrum evaluated at the exact rearrangement."""
    prob = euler_cauchy(alpha)
    lam = weighted(discrete_spectrum(prob, identity_map(prob.a, prob.b), Method.FD, n, 1), n)
    return counting_function(lam, euler_cauchy_omega(alpha, np.asarray(xs, dtype=float)))

