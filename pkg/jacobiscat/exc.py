class JacobiscatError(Exception):
    """Generic error class."""


class HypothesisError(JacobiscatError):
    """Base for errors signalling that a numerical hypothesis of the
    theory failed for the given instance (a singular Wronskian, a singular
    connection coefficient, an ambiguous rank decision, ...).

    The command line interface maps these to exit status 2."""


class CoefficientError(JacobiscatError):
    """An error originating in the :mod:`~jacobiscat.coefficients` module.
    Raised for malformed or invalid instance data."""


class JostError(JacobiscatError):
    """An error originating in the :mod:`~jacobiscat.jost` module."""


class WronskianError(JacobiscatError):
    """An error originating in the :mod:`~jacobiscat.wronskian` module."""


class WronskianConstancyError(WronskianError, HypothesisError):
    """Raised when a Wronskian that must be independent of the index
    varies by more than the constancy tolerance. Signals that an argument
    is not a solution, or that the two arguments solve the equation at
    different spectral parameters."""


class SingularWronskianError(WronskianError, HypothesisError):
    """Raised when a Wronskian that has to be inverted is numerically
    singular."""


class ScatteringError(JacobiscatError):
    """An error originating in the :mod:`~jacobiscat.scattering` module."""


class SingularConnectionError(ScatteringError, HypothesisError):
    """Raised when a connection coefficient that has to be inverted is
    numerically singular."""


class RankDecisionError(ScatteringError, HypothesisError):
    """Raised when a singular value of the band-edge Wronskian falls inside
    the ambiguity band around the rank threshold."""


class ExtensionError(ScatteringError, HypothesisError):
    """Raised when the compressed block of the band-edge Wronskian
    derivative is singular, so that no continuous extension is available."""


class SpectrumError(JacobiscatError):
    """An error originating in the :mod:`~jacobiscat.spectrum` module."""
