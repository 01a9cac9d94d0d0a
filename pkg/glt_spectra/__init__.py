"""Spectral symbols, monotone rearrangements and eigenvalue error analysis for
finite-difference and isogeometric discretizations of Sturm-Liouville problems."""

from .errors import ConfigError, GltSpectraError, GridError, NumericalError
from .problems import SLProblem, dirichlet_laplacian, euler_cauchy, l1_case, liouville_transform
from .symbol import MonotoneRearrangement, SeparableSymbol, discretization_symbol, rearrange

__version__ = "0.1.0"

__all__ = [
    'ConfigError',
    'GltSpectraError',
    'GridError',
    'NumericalError',
    'SLProblem',
    'dirichlet_laplacian',
    'euler_cauchy',
    'l1_case',
    'liouville_transform',
    'MonotoneRearrangement',
    'SeparableSymbol',
    'discretization_symbol',
    'rearrange',
]
