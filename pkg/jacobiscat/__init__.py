from os import PathLike
from typing import Any, Mapping, Union

from .coefficients import CoefficientData, SpectralPoint, load_coefficients
from .exc import JacobiscatError
from .jost import OperatorSolution, Species
from .output import Table, create_output
from .scattering import ExtensionData, ScatteringData
from .spectrum import EigenvalueBounds, EigenvalueItem, EigenvalueReport, Method
from .tolerances import DEFAULT_TOLERANCES, Tolerances
from .wronskian import Basis, ConnectionCoefficients

__all__ = [
    'CoefficientData',
    'SpectralPoint',
    'load_coefficients',
    'JacobiscatError',
    'OperatorSolution',
    'Species',
    'Table',
    'create_output',
    'ExtensionData',
    'ScatteringData',
    'EigenvalueBounds',
    'EigenvalueItem',
    'EigenvalueReport',
    'Method',
    'DEFAULT_TOLERANCES',
    'Tolerances',
    'Basis',
    'ConnectionCoefficients',
    'create_instance',
]

__version__ = '0.1.0'


def create_instance(
        source: Union[str, PathLike, Mapping[str, Any]] = None,
        *,
        dim: int = 1,
        tol: Tolerances = None,
) -> CoefficientData:
    """Create and return a :class:`~jacobiscat.coefficients.CoefficientData`
    instance.

    :param source: ``None`` for the free operator of dimension `dim`; a
        JSON-compatible mapping; an ``http(s)`` URL; or a file path.
    :param dim: The block dimension of the free operator.
    :param tol: Numerical thresholds used to validate the instance.
    :raise CoefficientError: If the instance is invalid.
    """
    if source is None:
        return CoefficientData.free(dim)
    if isinstance(source, Mapping):
        return CoefficientData.from_json(source, tol=tol)
    if isinstance(source, str) and source.startswith(('http://', 'https://')):
        return CoefficientData.loadr(source, tol=tol)
    return CoefficientData.loadf(source, tol=tol)
