import dataclasses
from dataclasses import dataclass

__all__ = [
    'Tolerances',
    'DEFAULT_TOLERANCES',
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    Relative thresholds are scaled by the norm named in their description.
    """

    inv_tol: float = 1e-10
    """A block is invertible if its smallest singular value exceeds
    ``inv_tol`` times its largest."""

    hermitian_tol: float = 1e-12
    """Bound on ``‖X − X*‖ / max(1, ‖X‖)`` for stored coefficients."""

    constancy_tol: float = 1e-10
    """Bound on the spread of a Wronskian over the checked indices,
    relative to ``max(1, ‖W‖)``."""

    identity_tol: float = 1e-9
    """Bound on residuals of connection-coefficient identities."""

    algebra_tol: float = 1e-8
    """Bound on residuals of transfer/scattering matrix identities."""

    series_slack_tol: float = 1e-12
    """Bound on series coefficients past their proved degree."""

    rank_tol: float = 1e-8
    """Kernel threshold for the band-edge Wronskian, relative to its norm."""

    zero_wronskian_tol: float = 1e-10
    """Absolute norm below which the band-edge Wronskian counts as zero."""

    refine_rel: float = 1e-8
    """Root acceptance threshold, relative to the median of the scanned
    function over the grid."""

    dedupe_tol: float = 1e-7
    """Roots closer than this in ``z`` are merged."""

    root_xtol: float = 1e-10
    """Target accuracy of refined roots in ``z``."""

    scan_delta: float = 1e-3
    """Distance kept from ``0`` and ``±1`` by the spectral scans."""

    unit_circle_tol: float = 1e-12
    """Allowed departure of ``|z|`` from 1 on the unit circle."""

    def replace(self, **changes: float) -> 'Tolerances':
        """Return a copy with the given fields overridden; ``None`` values
        are ignored."""
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_TOLERANCES = Tolerances()
