"""Separable spectral symbols, monotone rearrangements and the discrete Weyl law."""
from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from .config import DEFAULT_OUTLIER_EPS, PROBE_POINTS
from .errors import ConfigError, ConvergenceError
from .fd import fd_symbol
from .grids import Diffeomorphism, identity_map
from .iga import iga_symbol
from .problems import SLProblem, euler_cauchy

logger = logging.getLogger(__name__)

BISECTION_STEPS = 80
PHI_TOL = 1e-12
PHI_NOISE_FACTOR = 32.0


###############################################################################
# Symbols
###############################################################################

class SeparableSymbol:
    """omega(x, theta) = amp(x) * freq(theta) on [a, b] x [0, pi].

    ``freq_family`` marks the FD/IgA frequency functions, which vanish at 0
    and are nondecreasing on [0, pi].
    """

    def __init__(self, amp: Callable[[np.ndarray], np.ndarray], freq: Callable[[np.ndarray], np.ndarray],
                 a: float, b: float, freq_family: bool = False, label: str = "symbol"):
        if not b > a:
            raise ConfigError(f"need b > a (got a={a}, b={b})")
        self.amp = amp
        self.freq = freq
        self.a = float(a)
        self.b = float(b)
        self.freq_family = freq_family
        self.label = label
        with np.errstate(divide="ignore", invalid="ignore"):
            ends = np.asarray(amp(np.array([self.a, self.b])), dtype=float)
        self.unbounded = not bool(np.all(np.isfinite(ends)))
        probe = self.a + (self.b - self.a) * np.arange(1, PROBE_POINTS + 1) / (PROBE_POINTS + 1)
        if not np.all(amp(probe) > 0):
            raise ConfigError(f"{label}: amplitude must be positive on the probe grid")
        self._range: Optional[Tuple[float, float]] = None

    def __call__(self, x, theta) -> np.ndarray:
        return self.amp(np.asarray(x, dtype=float)) * self.freq(np.asarray(theta, dtype=float))

    def sample_grid(self, r: int, r_theta: Optional[int] = None) -> np.ndarray:
        """Values on the interior r x r_theta grid, shape (r, r_theta)."""
        r_theta = r if r_theta is None else r_theta
        xs = self.a + (self.b - self.a) * np.arange(1, r + 1) / (r + 1)
        thetas = np.arange(1, r_theta + 1) * math.pi / (r_theta + 1)
        return np.multiply.outer(self.amp(xs), self.freq(thetas))

    def __repr__(self) -> str:
        return f"SeparableSymbol({self.label}, [{self.a}, {self.b}], unbounded={self.unbounded})"


def sl_amplitude(prob: SLProblem, tau: Diffeomorphism) -> Callable[[np.ndarray], np.ndarray]:
    """x -> p(tau(x)) / (w(tau(x)) tau'(x)^2 (b-a)^2)."""
    length2 = (prob.b - prob.a) ** 2

    def amp(x):
        x = np.asarray(x, dtype=float)
        X = tau(x)
        with np.errstate(divide="ignore"):
            return prob.p(X) / (prob.w(X) * tau.derivative(x) ** 2 * length2)

    return amp


def discretization_symbol(prob: SLProblem, tau: Optional[Diffeomorphism] = None,
                          method: str = "fd", eta: int = 1) -> SeparableSymbol:
    """Symbol of the FD or IgA discretization of ``prob`` on the tau-mapped grid."""
    tau = identity_map(prob.a, prob.b) if tau is None else tau
    if method == "fd":
        freq = fd_symbol(eta)
    elif method == "iga":
        freq = iga_symbol(eta)
    else:
        raise ConfigError(f"unknown method {method!r}")
    return SeparableSymbol(sl_amplitude(prob, tau), freq, prob.a, prob.b, freq_family=True,
                           label=f"{method}(eta={eta}) {prob.name} on {tau.label}")


###############################################################################
# Essential range and outliers
###############################################################################

def _extrema(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> Tuple[float, float]:
    """Min and max of a continuous function: probe grid, then bounded refinement."""
    probe = np.linspace(lo, hi, PROBE_POINTS + 1)
    values = func(probe)
    step = (hi - lo) / PROBE_POINTS
    out = []
    for sign, pick in ((1.0, np.argmin), (-1.0, np.argmax)):
        i = int(pick(values))
        best = float(values[i])
        left, right = max(lo, probe[i] - step), min(hi, probe[i] + step)
        res = optimize.minimize_scalar(lambda t: sign * float(func(np.array(t))), bounds=(left, right),
                                       method="bounded", options={"xatol": 1e-12 * max(1.0, abs(hi - lo))})
        if res.success:
            best = min(best, sign * res.fun) if sign > 0 else max(best, sign * res.fun)
        out.append(best)
    return out[0], out[1]


def essential_range(sym: SeparableSymbol) -> Tuple[float, float]:
    """[min omega, max omega]; the upper end is +inf for unbounded symbols."""
    if sym._range is not None:
        return sym._range
    if sym.freq_family:
        f_lo, f_hi = float(sym.freq(np.array(0.0))), float(sym.freq(np.array(math.pi)))
    else:
        f_lo, f_hi = _extrema(sym.freq, 0.0, math.pi)
    if sym.unbounded:
        a_lo = float(np.min(sym.amp(sym.a + (sym.b - sym.a) * np.arange(1, PROBE_POINTS + 1) / (PROBE_POINTS + 1))))
        lo = min(a_lo * f_lo, 0.0) if f_lo <= 0 else a_lo * f_lo
        sym._range = (lo, math.inf)
    else:
        a_lo, a_hi = _extrema(sym.amp, sym.a, sym.b)
        products = [a_lo * f_lo, a_lo * f_hi, a_hi * f_lo, a_hi * f_hi]
        sym._range = (min(products), max(products))
    return sym._range


def is_outlier(lam, sym: SeparableSymbol, eps: float = DEFAULT_OUTLIER_EPS) -> np.ndarray:
    """True where lam lies outside the essential range widened by eps * width."""
    lo, hi = essential_range(sym)
    lam = np.asarray(lam, dtype=float)
    if math.isinf(hi):
        return lam < lo - eps * abs(lo)
    margin = eps * (hi - lo)
    return (lam < lo - margin) | (lam > hi + margin)


###############################################################################
# Monotone rearrangement
###############################################################################

class RearrangementMode(str, Enum):
    APPROX = "approx"
    EXACT = "exact"


class MonotoneRearrangement:
    """Piecewise-linear nondecreasing function on [0, 1] through (xs, vals)."""

    def __init__(self, xs: np.ndarray, vals: np.ndarray, mode: RearrangementMode, r: Optional[int] = None):
        xs = np.asarray(xs, dtype=float)
        vals = np.asarray(vals, dtype=float)
        if xs.shape != vals.shape:
            raise ConfigError("breakpoints and values must have the same length")
        if np.any(np.diff(xs) <= 0):
            raise ConfigError("breakpoints must be strictly increasing")
        if np.any(np.diff(vals) < 0):
            raise ConfigError("values must be nondecreasing")
        self.xs = xs
        self.vals = vals
        self.mode = mode
        self.r = r

    def __call__(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.xs, self.vals)

    def inverse(self, t) -> np.ndarray:
        """Distribution function phi(t) = |{x : omega~(x) <= t}|."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.vals, t, side="right")
        idx = np.clip(idx, 1, len(self.vals) - 1)
        v0, v1 = self.vals[idx - 1], self.vals[idx]
        x0, x1 = self.xs[idx - 1], self.xs[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(v1 > v0, (t - v0) / (v1 - v0), 1.0)
        out = x0 + np.clip(frac, 0.0, 1.0) * (x1 - x0)
        out = np.where(t < self.vals[0], 0.0, out)
        return np.where(t >= self.vals[-1], 1.0, out)

    @property
    def max_value(self) -> float:
        return float(self.vals[-1])


def rearrange(sym: SeparableSymbol, r: int, theta_refine: int = 1) -> MonotoneRearrangement:
    """Sampled monotone rearrangement of ``sym`` on an r x (theta_refine * r) grid.

    ``theta_refine > 1`` resolves the lowest quantiles of symbols whose
    amplitude blows up, where r frequency nodes are too coarse.
    """
    if r < 2:
        raise ConfigError(f"r must be >= 2 (got {r})")
    if theta_refine < 1:
        raise ConfigError(f"theta_refine must be >= 1 (got {theta_refine})")
    r_theta = r * theta_refine
    samples = np.sort(sym.sample_grid(r, r_theta), axis=None)
    m = r * r_theta
    j = np.arange(1, m + 1)
    lo, hi = essential_range(sym)
    if sym.unbounded:
        # the j*r_theta-th sorted sample sits on the sampling node j/(r+1)
        xs = j / (r_theta * (r + 1.0))
        slope = (samples[-1] - samples[-2]) / (xs[-1] - xs[-2])
        top = samples[-1] + slope * (1.0 - xs[-1])
        start = 0.0 if sym.freq_family else samples[0]
        xs = np.concatenate([[0.0], xs, [1.0]])
        vals = np.concatenate([[min(start, samples[0])], samples, [top]])
    else:
        start = 0.0 if sym.freq_family else min(lo, samples[0])
        xs = np.concatenate([[0.0], j / (m + 1.0), [1.0]])
        vals = np.concatenate([[min(start, samples[0])], samples, [max(hi, samples[-1])]])
    logger.debug("Rearranged %s with r=%d", sym.label, r)
    return MonotoneRearrangement(xs, vals, RearrangementMode.APPROX, r=r)


def sample_rearrangement(rearr: MonotoneRearrangement, n: int) -> np.ndarray:
    """omega~(k/(n+1)) for k = 1..n."""
    if n < 1:
        raise ConfigError(f"n must be >= 1 (got {n})")
    return rearr(np.arange(1, n + 1) / (n + 1.0))


###############################################################################
# Exact rearrangement of the Euler-Cauchy FD symbol
###############################################################################

class _EulerCauchyPhi:
    """Distribution function of alpha x^2 (2 - 2 cos theta) / (e^sqrt(alpha) - 1)^2."""

    def __init__(self, alpha: float):
        if not alpha > 0:
            raise ConfigError(f"alpha must be positive (got {alpha})")
        self.alpha = float(alpha)
        root = math.sqrt(alpha)
        self.span = math.expm1(root)  # b - 1
        self.b = math.exp(root)
        self.c = self.span / (2.0 * root)
        self.t_max = 4.0 * alpha * self.b ** 2 / self.span ** 2
        self.t_switch = 4.0 * alpha / self.span ** 2
        # the two antiderivative terms cancel to O(b - 1), so phi carries eps / (b - 1) noise
        self.tol = max(PHI_TOL, PHI_NOISE_FACTOR * np.finfo(float).eps / self.span)

    @staticmethod
    def _antiderivative(s, x):
        # d/dx of this is 2 arcsin(s/x) for x >= s
        ratio = np.clip(s / x, 0.0, 1.0)
        return 2.0 * x * np.arcsin(ratio) + 2.0 * s * np.log(x + np.sqrt(np.maximum(x * x - s * s, 0.0)))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        s = self.c * np.sqrt(np.maximum(t, 0.0))
        b = self.b
        low = self._antiderivative(s, b) - self._antiderivative(s, 1.0)
        s_hi = np.maximum(s, 1.0)
        high = math.pi * (s_hi - 1.0) + self._antiderivative(s_hi, b) - self._antiderivative(s_hi, s_hi)
        value = np.where(t <= self.t_switch, low, high) / (math.pi * self.span)
        return np.clip(value, 0.0, 1.0)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        s = self.c * np.sqrt(t)
        lower = np.maximum(s, 1.0)
        logs = (np.log(self.b + np.sqrt(np.maximum(self.b ** 2 - s * s, 0.0)))
                - np.log(lower + np.sqrt(np.maximum(lower * lower - s * s, 0.0))))
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.c / np.sqrt(t) * logs / (math.pi * self.span)

    def invert(self, x) -> np.ndarray:
        """t with phi(t) = x, by bracketed bisection followed by guarded Newton steps."""
        x = np.asarray(x, dtype=float)
        lo = np.zeros_like(x)
        hi = np.full_like(x, self.t_max)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            below = self(mid) < x
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        t = 0.5 * (lo + hi)
        for _ in range(2):
            slope = self.derivative(t)
            ok = np.isfinite(slope) & (slope > 0)
            step = np.where(ok, (self(t) - x) / np.where(ok, slope, 1.0), 0.0)
            candidate = np.clip(t - step, lo, hi)
            better = np.abs(self(candidate) - x) <= np.abs(self(t) - x)
            t = np.where(better, candidate, t)
        # phi is flat at its top, so the bracket cannot pin t_max
        t = np.where(x <= 0.0, 0.0, np.where(x >= 1.0, self.t_max, t))
        residual = np.abs(self(t) - x)
        if np.any(~np.isfinite(t)):
            raise ConvergenceError("phi inversion produced non-finite values")
        worst = float(np.max(residual)) if residual.size else 0.0
        if worst > self.tol:
            logger.warning("phi inversion residual %.3g above %.3g (alpha=%g)", worst, self.tol, self.alpha)
        return t


def euler_cauchy_phi(alpha: float, t) -> np.ndarray:
    """Exact distribution function of the Euler-Cauchy 3-point FD symbol."""
    phi = _EulerCauchyPhi(alpha)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > phi.t_max * (1 + 1e-14)):
        raise ConfigError(f"t must lie in [0, {phi.t_max}]")
    return phi(np.minimum(t_arr, phi.t_max))


def euler_cauchy_omega(alpha: float, x) -> np.ndarray:
    """Exact rearrangement omega~ at the points x in [0, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise ConfigError("x must lie in [0, 1]")
    return _EulerCauchyPhi(alpha).invert(x)


def euler_cauchy_rearrangement(alpha: float, n: int) -> MonotoneRearrangement:
    """Exact rearrangement sampled at k/(n+1), with the endpoints 0 and max omega."""
    if n < 1:
        raise ConfigError(f"n must be >= 1 (got {n})")
    phi = _EulerCauchyPhi(alpha)
    xs = np.arange(1, n + 1) / (n + 1.0)
    vals = np.maximum.accumulate(phi.invert(xs))
    return MonotoneRearrangement(
        np.concatenate([[0.0], xs, [1.0]]),
        np.concatenate([[0.0], vals, [phi.t_max]]),
        RearrangementMode.EXACT,
    )


def euler_cauchy_symbol(alpha: float, eta: int = 1, method: str = "fd",
                        tau: Optional[Diffeomorphism] = None) -> SeparableSymbol:
    return discretization_symbol(euler_cauchy(alpha), tau, method, eta)


###############################################################################
# Discrete Weyl law
###############################################################################

def counting_function(spectrum, t) -> np.ndarray:
    """|{k : lambda_k <= t}| / n for a sorted spectrum."""
    spectrum = np.asarray(spectrum, dtype=float)
    if not len(spectrum):
        raise ConfigError("empty spectrum")
    return np.searchsorted(spectrum, np.asarray(t, dtype=float), side="right") / len(spectrum)
