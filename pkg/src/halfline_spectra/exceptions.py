"""Exceptions raised across halfline_spectra.

Input problems derive from ``ValueError`` so plain ``except ValueError`` keeps
working; numerical failures derive from ``ArithmeticError`` through
``NumericalError``.
"""


class HalflineSpectraError(Exception):
    """Root of every error raised by the package."""


class DomainError(HalflineSpectraError, ValueError):
    """Argument outside the half-line."""


class ExponentError(HalflineSpectraError, ValueError):
    """Exponent outside the range accepted by an operation."""


class InadmissibleExponentsError(HalflineSpectraError, ValueError):
    """Exponents violate the admissibility conditions of a bound."""


class BranchError(HalflineSpectraError, ValueError):
    """Square root taken off the upper half-plane branch."""


class EssentialSpectrumError(HalflineSpectraError, ValueError):
    """Spectral parameter lies on the essential spectrum [0, inf)."""


class ContourError(HalflineSpectraError, ValueError):
    """Contour or search box touches the essential spectrum."""


class ConfigError(HalflineSpectraError, ValueError):
    """Invalid configuration document."""


class NumericalError(HalflineSpectraError, ArithmeticError):
    """Root of numerical failures."""


class NormDivergesError(NumericalError):
    """Norm integral or supremum diverges."""


class ConvergenceError(NumericalError):
    """Iteration did not converge in the allotted number of steps."""


class IntegrationError(NumericalError):
    """ODE integration failed."""


class ContourThroughZeroError(NumericalError):
    """Characteristic function is too small on a contour to count zeros."""
