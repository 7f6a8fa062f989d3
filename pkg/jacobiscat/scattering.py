"""Transfer and scattering matrices on the unit circle, and the
continuous extension of the scattering matrix to the band edges
``z = ±1``."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from jacobiscat.coefficients import CoefficientData
from jacobiscat.exc import ExtensionError, RankDecisionError, ScatteringError, SingularConnectionError
from jacobiscat.jost import (
    Species, build_series_data, default_window, jost_recursion, jost_series, series_derivative,
)
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import opnorm, smin
from jacobiscat.wronskian import ConnectionCoefficients, alpha_beta, wronskian_constant, wronskian_values

__all__ = [
    'ScatteringData',
    'ExtensionData',
    'transfer_matrix',
    'inverse_transfer_matrix',
    'scattering_matrix',
    'reflection_transmission',
    'alpha_inverse_extension',
    'scattering_extension',
    'circle_limit',
]

LOGGER = logging.getLogger(__name__)


@dataclass
class ScatteringData:
    """Connection coefficients at ``z`` and ``z⁻¹`` with the ``2d×2d``
    transfer matrix ``𝙼(z)``, its inverse ``𝙼⁻(z)`` and, when requested,
    the scattering matrix ``𝚂(z)``."""

    z: complex
    coefficients: ConnectionCoefficients
    coefficients_inverse: ConnectionCoefficients
    transfer: np.ndarray
    transfer_inverse: np.ndarray
    scattering: Optional[np.ndarray] = None
    residuals: Dict[str, float] = field(default_factory=dict)


def _check_circle(z: complex, tol: Tolerances) -> complex:
    z = complex(z)
    if abs(abs(z) - 1) > tol.unit_circle_tol:
        raise ScatteringError(f'z = {z} is not on the unit circle')
    if abs(z - 1) <= tol.unit_circle_tol or abs(z + 1) <= tol.unit_circle_tol:
        raise ScatteringError('The transfer and scattering matrices are not defined at z = ±1')
    return z


def _blocks_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(opnorm(lhs - rhs))) / max(1.0, float(np.max(opnorm(lhs))))


def transfer_matrix(
        c: CoefficientData,
        z: complex,
        window: Sequence[int] = None,
        *,
        tol: Tolerances = None,
) -> ScatteringData:
    """``𝙼(z) = [[α⁺(z), β⁺(z⁻¹)], [β⁺(z), α⁺(z⁻¹)]]``, defined by
    ``[U⁻(z), U⁻(z⁻¹)] = [U⁺(z⁻¹), U⁺(z)] 𝙼(z)``, together with
    ``𝙼⁻(z) = [[α⁻(z⁻¹), β⁻(z)], [β⁻(z⁻¹), α⁻(z)]]``.

    :raise ScatteringError: if `z` is not on the unit circle, is ``±1``,
        or ``𝙼𝙼⁻`` departs from the identity
    """
    tol = tol or DEFAULT_TOLERANCES
    z = _check_circle(z, tol)
    window = window or default_window(c)
    cc = alpha_beta(c, z, window, tol=tol)
    cci = alpha_beta(c, 1 / z, window, tol=tol)

    m = np.block([[cc.alpha_plus, cci.beta_plus], [cc.beta_plus, cci.alpha_plus]])
    m_inv = np.block([[cci.alpha_minus, cc.beta_minus], [cci.beta_minus, cc.alpha_minus]])

    identity = np.eye(2 * c.dim)
    defect = max(opnorm(m @ m_inv - identity), opnorm(m_inv @ m - identity))
    if defect > tol.algebra_tol * max(1.0, opnorm(m) * opnorm(m_inv)):
        raise ScatteringError(f'The transfer matrix and its inverse disagree by {defect:.3e} at z = {z}')

    u_plus = jost_recursion(c, Species.PLUS, z, window).blocks
    u_plus_inv = jost_recursion(c, Species.PLUS, 1 / z, window).blocks
    u_minus = jost_recursion(c, Species.MINUS, z, window).blocks
    u_minus_inv = jost_recursion(c, Species.MINUS, 1 / z, window).blocks
    incoming = np.concatenate((u_minus, u_minus_inv), axis=-1)
    outgoing = np.concatenate((u_plus_inv, u_plus), axis=-1)

    residuals = {
        'transfer_inverse': defect,
        'transfer_relation': _blocks_residual(incoming, outgoing @ m),
        'expansion': max(cc.residual, cci.residual),
    }
    LOGGER.debug('Transfer matrix at z = %s: residuals %s', z, residuals)
    return ScatteringData(z, cc, cci, m, m_inv, residuals=residuals)


def inverse_transfer_matrix(c: CoefficientData, z: complex, window: Sequence[int] = None, *,
                            tol: Tolerances = None) -> np.ndarray:
    return transfer_matrix(c, z, window, tol=tol).transfer_inverse


def _inverse(x: np.ndarray, name: str, z: complex, tol: Tolerances) -> np.ndarray:
    if smin(x) <= tol.inv_tol * max(1.0, opnorm(x)):
        raise SingularConnectionError(f'{name} is numerically singular at z = {z}')
    return np.linalg.inv(x)


def scattering_matrix(
        c: CoefficientData,
        z: complex,
        window: Sequence[int] = None,
        *,
        tol: Tolerances = None,
) -> ScatteringData:
    """The scattering matrix

    ``𝚂(z) = [[α⁻(z)⁻¹, −β⁺(z)α⁺(z)⁻¹], [−β⁻(z)α⁻(z)⁻¹, α⁺(z)⁻¹]]``

    defined by ``[U⁻(z⁻¹), U⁺(z⁻¹)] = [U⁺(z), U⁻(z)] 𝚂(z)``.

    :raise SingularConnectionError: if ``α⁺(z)`` or ``α⁻(z)`` is singular
    :raise ScatteringError: if the defining relation fails
    """
    tol = tol or DEFAULT_TOLERANCES
    window = window or default_window(c)
    data = transfer_matrix(c, z, window, tol=tol)
    z = data.z
    cc = data.coefficients

    alpha_plus_inv = _inverse(cc.alpha_plus, 'α⁺', z, tol)
    alpha_minus_inv = _inverse(cc.alpha_minus, 'α⁻', z, tol)
    s = np.block([
        [alpha_minus_inv, -cc.beta_plus @ alpha_plus_inv],
        [-cc.beta_minus @ alpha_minus_inv, alpha_plus_inv],
    ])

    u_plus = jost_recursion(c, Species.PLUS, z, window).blocks
    u_plus_inv = jost_recursion(c, Species.PLUS, 1 / z, window).blocks
    u_minus = jost_recursion(c, Species.MINUS, z, window).blocks
    u_minus_inv = jost_recursion(c, Species.MINUS, 1 / z, window).blocks
    incoming = np.concatenate((u_minus_inv, u_plus_inv), axis=-1)
    outgoing = np.concatenate((u_plus, u_minus), axis=-1)
    relation = _blocks_residual(incoming, outgoing @ s)
    if relation > tol.algebra_tol:
        raise ScatteringError(f'The scattering relation fails by {relation:.3e} at z = {z}')

    data.scattering = s
    data.residuals.update(
        scattering_relation=relation,
        alpha_plus_inverse_norm=opnorm(alpha_plus_inv),
        alpha_minus_inverse_norm=opnorm(alpha_minus_inv),
        unitarity_plus=opnorm(cc.alpha_plus.conj().T @ cc.alpha_plus - cc.beta_plus.conj().T @ cc.beta_plus
                              - np.eye(c.dim)),
        unitarity_minus=opnorm(cc.alpha_minus.conj().T @ cc.alpha_minus - cc.beta_minus.conj().T @ cc.beta_minus
                               - np.eye(c.dim)),
    )
    return data


def reflection_transmission(c: CoefficientData, z: complex, *, tol: Tolerances = None) -> Dict[str, complex]:
    """Scalar transmission and reflection amplitudes ``t = 1/α⁻``,
    ``r = −β⁻/α⁻`` (incidence from the left) and ``t' = 1/α⁺``,
    ``r' = −β⁺/α⁺`` (from the right). Only for ``d = 1``."""
    if c.dim != 1:
        raise ScatteringError('Reflection and transmission amplitudes are defined for d = 1')
    s = scattering_matrix(c, z, tol=tol).scattering
    return {
        't_left': complex(s[0, 0]),
        'r_left': complex(s[1, 0]),
        't_right': complex(s[1, 1]),
        'r_right': complex(s[0, 1]),
    }


@dataclass
class ExtensionData:
    """The band-edge analysis of ``α±(z)⁻¹`` at ``z0 = ±1``.

    With ``Ŵ(z) = W(U±(z̄)*, U∓(z)) = W(z0) + (z − z0)δW(z)``, the kernel
    of ``W(z0)`` and the orthogonal complement of its range split the
    limit of ``α±`` into blocks; only the block ``A`` between them
    survives in the limit of the inverse.
    """

    z0: int
    species: Species
    wronskian: np.ndarray
    """``W(z0)``"""

    delta_wronskian: np.ndarray
    """``δW(z0)``"""

    delta_deviation: float
    """Spread of ``δW_n(z0)`` over the checked indices."""

    singular_values: np.ndarray
    threshold: float
    kernel: np.ndarray
    """Orthonormal basis of ``ker W(z0)``, as columns."""

    corange: np.ndarray
    """Orthonormal basis of ``(range W(z0))^⊥``, as columns."""

    block_a: np.ndarray
    block_b: np.ndarray
    block_c: np.ndarray
    alpha_inverse: np.ndarray
    """The extension of ``α±(z)⁻¹`` to ``z0``."""

    alpha: Optional[np.ndarray] = None
    """The extension of ``α±(z)`` itself; present only when ``W(z0) = 0``."""

    @property
    def kernel_rank(self) -> int:
        return self.kernel.shape[1]


def alpha_inverse_extension(
        c: CoefficientData,
        z0: int,
        species: Species = Species.PLUS,
        window: Sequence[int] = None,
        *,
        tol: Tolerances = None,
) -> ExtensionData:
    """Extend ``α±(z)⁻¹`` continuously to ``z0 = ±1``.

    :raise RankDecisionError: if a singular value of ``W(z0)`` lies
        within a factor 10 of the kernel threshold
    :raise ExtensionError: if the compressed block ``A(z0)`` is singular
    """
    tol = tol or DEFAULT_TOLERANCES
    if z0 not in (1, -1):
        raise ScatteringError(f'z0 must be +1 or -1, got {z0!r}')
    species = Species(species)
    window = window or default_window(c)
    s = build_series_data(c, window, tol=tol)
    d = c.dim

    u = jost_series(c, s, species, z0, window)
    v = jost_series(c, s, species.opposite, z0, window)
    du = series_derivative(c, s, species, z0, window)
    dv = series_derivative(c, s, species.opposite, z0, window)

    # z0 is real, so the conjugate-point solution is U(z0) itself
    w0 = wronskian_constant(c, u.conjugate_transpose(), v, tol=tol).value
    ns, first, _ = wronskian_values(c, u.conjugate_transpose(), dv)
    _, second, _ = wronskian_values(c, du.conjugate_transpose(), v)
    delta = first + second
    delta_w = delta.mean(axis=0)
    deviation = float(np.max(opnorm(delta - delta_w)))
    LOGGER.debug('δW%s(%d) spread over n = %d..%d: %.3e (|δW| = %.3e)',
                 '+' if species is Species.PLUS else '-', z0, ns[0], ns[-1], deviation, opnorm(delta_w))
    if deviation > tol.constancy_tol * max(1.0, opnorm(delta_w)):
        LOGGER.warning('δW(%d) is not constant in n: spread %.3e', z0, deviation)

    # limit of (z − z0)/(z⁻¹ − z) for α⁺, of (z − z0)/(z − z⁻¹) for α⁻
    g = (-0.5 if species is Species.PLUS else 0.5) * delta_w

    left, sv, right_h = np.linalg.svd(w0)
    if sv[0] <= tol.zero_wronskian_tol:
        threshold = 0.0
        mask = np.ones(d, dtype=bool)
    else:
        threshold = tol.rank_tol * sv[0]
        ambiguous = (sv >= 0.1 * threshold) & (sv <= 10 * threshold)
        if np.any(ambiguous):
            raise RankDecisionError(f'Singular values {sv[ambiguous]} of W({z0}) are too close to '
                                    f'the kernel threshold {threshold:.3e}')
        mask = sv <= threshold

    kernel = right_h[mask].conj().T
    kernel_perp = right_h[~mask].conj().T
    corange = left[:, mask]
    corange_perp = left[:, ~mask]
    block_a = corange.conj().T @ g @ kernel
    block_b = corange.conj().T @ g @ kernel_perp
    block_c = corange_perp.conj().T @ g @ kernel
    LOGGER.debug('W(%d) singular values %s, kernel rank %d', z0, sv, kernel.shape[1])

    if kernel.shape[1]:
        if smin(block_a) <= tol.inv_tol * max(1.0, opnorm(g)):
            raise ExtensionError(f'The compressed block A({z0}) is singular; the {species.value} α(z)⁻¹ '
                                 f'has no continuous extension')
        alpha_inverse = kernel @ np.linalg.inv(block_a) @ corange.conj().T
    else:
        alpha_inverse = np.zeros((d, d), dtype=complex)

    alpha = g if mask.all() else None
    return ExtensionData(
        z0=z0,
        species=species,
        wronskian=w0,
        delta_wronskian=delta_w,
        delta_deviation=deviation,
        singular_values=sv,
        threshold=threshold,
        kernel=kernel,
        corange=corange,
        block_a=block_a,
        block_b=block_b,
        block_c=block_c,
        alpha_inverse=alpha_inverse,
        alpha=alpha,
    )


def scattering_extension(
        c: CoefficientData,
        z0: int,
        window: Sequence[int] = None,
        *,
        tol: Tolerances = None,
) -> np.ndarray:
    """The continuous extension of ``𝚂(z)`` to ``z0 = ±1``.

    The diagonal blocks come from :func:`alpha_inverse_extension`; the
    off-diagonal blocks use the free-region identities
    ``β⁺α⁺⁻¹ = z^{−n}(U⁻_n(z)α⁺⁻¹ − z^{−n}I)`` for ``n > n_max`` and
    ``β⁻α⁻⁻¹ = zⁿ(U⁺_n(z)α⁻⁻¹ − zⁿI)`` for ``n < n_min``.
    """
    tol = tol or DEFAULT_TOLERANCES
    window = window or default_window(c)
    ext_plus = alpha_inverse_extension(c, z0, Species.PLUS, window, tol=tol).alpha_inverse
    ext_minus = alpha_inverse_extension(c, z0, Species.MINUS, window, tol=tol).alpha_inverse
    identity = np.eye(c.dim)

    n = c.n_max + 1
    u_minus = jost_recursion(c, Species.MINUS, z0, (n, n))[n]
    ratio_plus = z0 ** -n * (u_minus @ ext_plus - z0 ** -n * identity)

    n = c.n_min - 1
    u_plus = jost_recursion(c, Species.PLUS, z0, (n, n))[n]
    ratio_minus = z0 ** n * (u_plus @ ext_minus - z0 ** n * identity)

    return np.block([[ext_minus, -ratio_plus], [-ratio_minus, ext_plus]])


def circle_limit(
        fn: Callable[[complex], np.ndarray],
        z0: int,
        thetas: Sequence[float] = (1e-2, 1e-3, 1e-4),
) -> np.ndarray:
    """Richardson-extrapolated limit of ``fn(z0·e^{iθ})`` as ``θ → 0⁺``
    from three geometrically spaced angles."""
    if len(thetas) != 3:
        raise ValueError('Exactly three angles are required')
    q = thetas[0] / thetas[1]
    if not np.isclose(thetas[1] / thetas[2], q) or q <= 1:
        raise ValueError('The angles must decrease geometrically')
    f = [np.asarray(fn(z0 * np.exp(1j * theta))) for theta in thetas]
    first = [(q * f[i + 1] - f[i]) / (q - 1) for i in range(2)]
    return (q * q * first[1] - first[0]) / (q * q - 1)
