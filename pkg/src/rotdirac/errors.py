"""Exception hierarchy shared by all modules."""


class RotDiracError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(RotDiracError, ValueError):
    """Invalid physical parameters or run settings."""


class NonPositiveDiscriminant(RotDiracError, ValueError):
    """``1 + 2 s omega eta <= 0``: rotation too fast for the spin-down branch."""


class NonPhysicalRadicand(RotDiracError, ValueError):
    """Negative radicand when inverting nu -> energy."""


class ZeroFrequency(RotDiracError, ValueError):
    """Quantization route divides by ``m * omega0 * delta`` which vanishes."""


class UnboundedDomain(RotDiracError, ValueError):
    """Hard-wall route requested with omega = 0 (no light-cone wall)."""


class PoleAtB(RotDiracError, ValueError):
    """Second Kummer parameter is zero or a negative integer."""


class DomainError(RotDiracError, ValueError):
    """Argument outside the domain of a special-function approximation."""


class NoConvergence(RotDiracError, ArithmeticError):
    """Series hit its term cap before meeting the stopping rule."""


class GridTooCoarse(RotDiracError, ArithmeticError):
    """Richardson error estimate of the radial eigensolver exceeds tolerance."""


class NoSignChange(RotDiracError, ArithmeticError):
    """Root scan reached its cap before bracketing the requested roots."""


class ZeroNorm(RotDiracError, ValueError):
    """Wavefunction sample is identically zero."""
