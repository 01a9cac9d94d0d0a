"""Uniform, mapped and ghost-extended grids."""
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from .config import PROBE_POINTS
from .errors import ConfigError, GridError

logger = logging.getLogger(__name__)

ENDPOINT_TOL = 1e-12


class Diffeomorphism:
    """A monotone C^1 map tau of [a, b] onto itself, with its derivative."""

    def __init__(self, tau: Callable[[np.ndarray], np.ndarray],
                 tau_prime: Callable[[np.ndarray], np.ndarray],
                 a: float, b: float, label: str = "custom"):
        self.tau = tau
        self.tau_prime = tau_prime
        self.a = float(a)
        self.b = float(b)
        self.label = label
        self._validate()

    def _validate(self) -> None:
        scale = max(1.0, abs(self.a), abs(self.b))
        ends = self.tau(np.array([self.a, self.b]))
        if abs(ends[0] - self.a) > ENDPOINT_TOL * scale or abs(ends[1] - self.b) > ENDPOINT_TOL * scale:
            raise GridError(f"{self.label}: tau must fix the endpoints (got {ends[0]!r}, {ends[1]!r})")
        probe = np.linspace(self.a, self.b, PROBE_POINTS)
        if np.any(self.tau_prime(probe) == 0):
            raise GridError(f"{self.label}: tau' vanishes on the probe grid")
        if np.any(np.diff(self.tau(probe)) <= 0):
            raise GridError(f"{self.label}: tau is not strictly increasing on the probe grid")

    def __call__(self, x):
        return self.tau(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self.tau_prime(np.asarray(x, dtype=float))

    def __repr__(self) -> str:
        return f"Diffeomorphism({self.label}, [{self.a}, {self.b}])"


class ExtendedGrid:
    """Nodes x_{1-eta} ... x_{n+eta}; interior nodes are x_1 ... x_n."""

    def __init__(self, nodes: np.ndarray, n: int, eta: int, a: float, b: float):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.shape != (n + 2 * eta,):
            raise GridError(f"expected {n + 2 * eta} nodes, got {nodes.shape}")
        if np.any(np.diff(nodes) <= 0):
            raise GridError("grid nodes must be strictly increasing")
        self.nodes = nodes
        self.nodes.setflags(write=False)
        self.n = n
        self.eta = eta
        self.a = float(a)
        self.b = float(b)

    @property
    def indices(self) -> np.ndarray:
        """Node labels j = 1-eta ... n+eta."""
        return np.arange(1 - self.eta, self.n + self.eta + 1)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[self.eta:self.eta + self.n]

    def node(self, j: int) -> float:
        return float(self.nodes[j + self.eta - 1])

    def __len__(self) -> int:
        return len(self.nodes)


def uniform_grid(a: float, b: float, n: int, eta: int) -> ExtendedGrid:
    """x_j = a + (b-a) j/(n+1) for j = 1-eta ... n+eta."""
    if n < 1:
        raise ConfigError(f"n must be >= 1 (got {n})")
    if eta < 1:
        raise ConfigError(f"eta must be >= 1 (got {eta})")
    if not b > a:
        raise ConfigError(f"need b > a (got a={a}, b={b})")
    j = np.arange(1 - eta, n + eta + 1)
    nodes = a + (b - a) * j / (n + 1)
    nodes[j == 0] = a
    nodes[j == n + 1] = b
    return ExtendedGrid(nodes, n, eta, a, b)


def mapped_grid(g: ExtendedGrid, tau: Diffeomorphism) -> ExtendedGrid:
    """Apply tau to the interior nodes; ghost nodes keep their uniform values."""
    nodes = np.array(g.nodes)
    inner = slice(g.eta, g.eta + g.n)
    nodes[inner] = tau(nodes[inner])
    if np.any(np.diff(nodes) <= 0):
        raise GridError(f"mapped grid under {tau.label} is not strictly increasing")
    return ExtendedGrid(nodes, g.n, g.eta, g.a, g.b)


def identity_map(a: float, b: float) -> Diffeomorphism:
    return Diffeomorphism(
        tau=lambda x: np.asarray(x, dtype=float),
        tau_prime=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        a=a, b=b, label="identity",
    )


def exp_map(alpha: float) -> Diffeomorphism:
    """Grid map on [1, e^sqrt(alpha)] that makes the Euler-Cauchy amplitude constant.

    tau = tau2 o tau1 with tau1(x) = (x-1)/(e^sqrt(alpha)-1), tau2(y) = e^(sqrt(alpha) y).
    """
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive (got {alpha})")
    root = math.sqrt(alpha)
    span = math.expm1(root)
    b = math.exp(root)

    def tau(x):
        tau1 = (np.asarray(x, dtype=float) - 1.0) / span
        return np.exp(root * tau1)

    def tau_prime(x):
        tau1 = (np.asarray(x, dtype=float) - 1.0) / span
        return root * np.exp(root * tau1) / span

    return Diffeomorphism(tau, tau_prime, 1.0, b, label=f"exp(alpha={alpha:g})")
