"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical failures with 3, and I/O failures with 4.
"""


class EhrenfestError(Exception):
    """Base class for package-specific errors."""


class ConfigError(EhrenfestError, ValueError):
    """A scenario file or parameter set failed validation."""


class NumericalError(EhrenfestError, RuntimeError):
    """A numerical routine left its domain of validity."""


class TrajectoryDivergedError(NumericalError):
    """Classical integration produced non-finite state components."""


class QuadratureError(NumericalError):
    """Adaptive quadrature hit its depth cap before converging."""


class DomainExhaustedError(NumericalError):
    """Wavepacket density reached the edge of the spatial grid."""


class NonNormalizableError(NumericalError):
    """Semiclassical Gaussian lost its positive real width parameter."""


class ComparisonError(NumericalError):
    """Path comparison is not applicable to the supplied record."""
