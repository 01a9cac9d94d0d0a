"""Exception hierarchy shared by the library and the CLI.

`ConfigError` covers anything the caller can fix by changing parameters and
maps to exit code 2; `NumericalError` covers failures inside a computation and
maps to exit code 3.
"""


class GltSpectraError(Exception):
    """Base class for every error raised by glt_spectra."""


class ConfigError(GltSpectraError, ValueError):
    """Invalid parameter or forbidden parameter combination."""


class GridError(ConfigError):
    """Grid nodes are not strictly increasing or a map is not a diffeomorphism."""


class NumericalError(GltSpectraError):
    """A computation could not deliver its contract."""


class NotPositiveDefiniteError(NumericalError):
    """Cholesky factorization broke down."""


class ConvergenceError(NumericalError):
    """Quadrature, root finding or an eigensolver did not converge."""


class AsymmetryError(NumericalError):
    """A symmetric solver was handed a matrix that is not symmetric."""
