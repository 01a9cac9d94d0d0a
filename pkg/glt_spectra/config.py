"""Tunables and desk-scale caps.

Caps can be raised with the ``GLT_SPECTRA_MAX_N`` environment variable, which
applies both to table sizes and to the dense eigensolver paths.
"""
from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

MAX_N_ENV = "GLT_SPECTRA_MAX_N"

DEFAULT_MAX_N = 5000
DENSE_MAX_N = 3000
TRIDIAGONAL_MAX_N = 100_000

DEFAULT_OUTLIER_EPS = 0.01
GAP_GRID_N = 1000
L1_THETA_REFINE = 3
PROBE_POINTS = 1000


def _env_override() -> int | None:
    raw = os.environ.get(MAX_N_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r (not an integer)", MAX_N_ENV, raw)
        return None
    if value < 1:
        logger.warning("Ignoring %s=%r (must be positive)", MAX_N_ENV, raw)
        return None
    return value


def max_n() -> int:
    """Largest matrix dimension a table computation may assemble."""
    override = _env_override()
    return DEFAULT_MAX_N if override is None else override


def dense_max_n() -> int:
    """Largest dimension accepted by the dense eigensolver paths."""
    override = _env_override()
    return DENSE_MAX_N if override is None else max(override, DENSE_MAX_N)
