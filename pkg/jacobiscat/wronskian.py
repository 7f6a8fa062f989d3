from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from jacobiscat.coefficients import CoefficientData, apply_operator
from jacobiscat.exc import SingularWronskianError, WronskianConstancyError, WronskianError
from jacobiscat.jost import (
    JostSeriesData, OperatorSolution, Species, default_window, jost_recursion, jost_series,
)
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import opnorm

__all__ = [
    'WronskianValue',
    'ConnectionCoefficients',
    'Basis',
    'adjoint_conjugate_solution',
    'wronskian_at',
    'wronskian_values',
    'wronskian_constant',
    'jost_identities',
    'green_identity',
    'christoffel_darboux',
    'alpha_beta',
    'fundamental_solve',
    'fundamental_matrix',
    'z_operator',
    'expansion_residual',
]

LOGGER = logging.getLogger(__name__)


@dataclass
class WronskianValue:
    """A Wronskian ``W(U, V)`` of two solutions at equal ``λ``, checked
    for independence of the index."""

    value: np.ndarray
    """Mean of the evaluations."""

    n_checked: List[int]
    """Indices at which the Wronskian was evaluated."""

    deviation: float = 0.0
    """Largest pairwise distance between the evaluations."""

    scale: float = 0.0
    """Largest norm of a summand ``U_{n−1}A_{n−1}V_n`` or ``U_nA_{n−1}V_{n−1}``;
    the magnitude against which cancellation to zero is judged."""

    def is_invertible(self, tol: Tolerances = None) -> bool:
        tol = tol or DEFAULT_TOLERANCES
        s = np.linalg.svd(self.value, compute_uv=False)
        return bool(s[-1] > tol.inv_tol * max(self.scale, s[0]))


class Basis(str, Enum):
    """Pairs of Jost solutions used as fundamental systems."""

    PLUS_PAIR = 'plus_pair'
    """``{U⁺(z), U⁺(z⁻¹)}``"""

    MINUS_PAIR = 'minus_pair'
    """``{U⁻(z), U⁻(z⁻¹)}``"""

    PLUS_MINUS = 'plus_minus'
    """``{U⁺(z), U⁻(z)}``"""

    PLUS_MINUS_INVERSE = 'plus_minus_inverse'
    """``{U⁺(z), U⁻(z⁻¹)}``"""

    MINUS_PLUS_INVERSE = 'minus_plus_inverse'
    """``{U⁻(z), U⁺(z⁻¹)}``"""

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}.{self.name}'

    @property
    def members(self) -> Tuple[Tuple[Species, bool], Tuple[Species, bool]]:
        """The two members as ``(species, evaluated at z⁻¹)``."""
        return _members[self]


_members = {
    Basis.PLUS_PAIR: ((Species.PLUS, False), (Species.PLUS, True)),
    Basis.MINUS_PAIR: ((Species.MINUS, False), (Species.MINUS, True)),
    Basis.PLUS_MINUS: ((Species.PLUS, False), (Species.MINUS, False)),
    Basis.PLUS_MINUS_INVERSE: ((Species.PLUS, False), (Species.MINUS, True)),
    Basis.MINUS_PLUS_INVERSE: ((Species.MINUS, False), (Species.PLUS, True)),
}


@dataclass
class ConnectionCoefficients:
    """The coefficients in ``U∓(z) = U±(z⁻¹)α±(z) + U±(z)β±(z)``.

    ``α±`` multiplies the solution that grows away from the support
    inside the unit disk; for the free operator ``α± = I`` and ``β± = 0``.
    """

    z: complex
    alpha_plus: np.ndarray
    beta_plus: np.ndarray
    alpha_minus: np.ndarray
    beta_minus: np.ndarray
    residual: float = 0.0
    """Largest relative residual of the two expansions over the window."""

    wronskians: Dict[str, WronskianValue] = field(default_factory=dict, repr=False)

    def alpha(self, species: Species) -> np.ndarray:
        return self.alpha_plus if Species(species) is Species.PLUS else self.alpha_minus

    def beta(self, species: Species) -> np.ndarray:
        return self.beta_plus if Species(species) is Species.PLUS else self.beta_minus


def _solution(
        c: CoefficientData,
        species: Species,
        z: complex,
        window: Sequence[int],
        series: Optional[JostSeriesData],
) -> OperatorSolution:
    if series is not None:
        return jost_series(c, series, species, z, window)
    return jost_recursion(c, species, z, window)


def adjoint_conjugate_solution(
        c: CoefficientData,
        species: Species,
        z: complex,
        window: Sequence[int] = None,
        series: JostSeriesData = None,
) -> OperatorSolution:
    """``{U_n(z̄)*}``: the Jost solution evaluated at the conjugate point,
    blockwise adjoint. This is the left argument of every Wronskian
    ``W(U(z̄)*, V(z))``.

    :param series: evaluate by series instead of recursion
    """
    u = _solution(c, species, np.conj(complex(z)), window, series)
    return u.conjugate_transpose()


def _common_indices(left: OperatorSolution, right: OperatorSolution) -> range:
    return range(max(left.lo, right.lo) + 1, min(left.hi, right.hi) + 1)


def wronskian_at(c: CoefficientData, left: OperatorSolution, right: OperatorSolution, n: int) -> np.ndarray:
    """``W_n(U, V) = U_{n−1}A_{n−1}V_n − U_nA_{n−1}V_{n−1}``.

    The pairing is bilinear: `left` must already be in adjoint form when
    a ``W(U(z̄)*, V)`` is wanted (see :func:`adjoint_conjugate_solution`).

    :raise WronskianError: if ``n − 1`` or ``n`` is outside either window
    """
    if n not in _common_indices(left, right):
        raise WronskianError(f'W_{n} needs indices {n - 1} and {n} in both windows '
                             f'{left.window} and {right.window}')
    a = c.a(n - 1)
    return left[n - 1] @ a @ right[n] - left[n] @ a @ right[n - 1]


def wronskian_values(
        c: CoefficientData,
        left: OperatorSolution,
        right: OperatorSolution,
) -> Tuple[List[int], np.ndarray, float]:
    """Evaluate ``W_n`` at every admissible index.

    :return: the indices, the stacked values and the largest summand norm
    """
    ns = list(_common_indices(left, right))
    if not ns:
        raise WronskianError(f'Windows {left.window} and {right.window} share no Wronskian index')
    lu = np.stack([left[n] for n in ns])
    lp = np.stack([left[n - 1] for n in ns])
    ru = np.stack([right[n] for n in ns])
    rp = np.stack([right[n - 1] for n in ns])
    a = np.stack([c.a(n - 1) for n in ns])
    first = lp @ a @ ru
    second = lu @ a @ rp
    scale = float(max(np.max(opnorm(first)), np.max(opnorm(second))))
    return ns, first - second, scale


def wronskian_constant(
        c: CoefficientData,
        left: OperatorSolution,
        right: OperatorSolution,
        *,
        tol: Tolerances = None,
) -> WronskianValue:
    """Evaluate a Wronskian at every index the windows allow (at least 5),
    check that it does not depend on the index, and return its mean.

    :raise WronskianError: if fewer than 5 indices are available
    :raise WronskianConstancyError: if the evaluations spread by more
        than ``constancy_tol·max(1, ‖W‖)``
    """
    tol = tol or DEFAULT_TOLERANCES
    ns, values, scale = wronskian_values(c, left, right)
    if len(ns) < 5:
        raise WronskianError(f'Constancy needs at least 5 indices, windows allow {len(ns)}')

    mean = values.mean(axis=0)
    deviation = float(np.max(opnorm(values[:, None] - values[None, :])))
    bound = tol.constancy_tol * max(1.0, opnorm(mean))
    LOGGER.debug('Wronskian over n = %d..%d: |W| = %.3e, spread %.3e', ns[0], ns[-1], opnorm(mean), deviation)
    if deviation > bound:
        raise WronskianConstancyError(
            f'Wronskian varies by {deviation:.3e} over n = {ns[0]}..{ns[-1]} (allowed {bound:.3e}); '
            f'the arguments are not solutions at equal λ'
        )
    return WronskianValue(mean, ns, deviation, scale)


def _check_point(z: complex, tol: Tolerances) -> complex:
    z = complex(z)
    if z == 0 or abs(z - 1) <= tol.unit_circle_tol or abs(z + 1) <= tol.unit_circle_tol:
        raise WronskianError(f'z = {z} is excluded (z must avoid 0 and ±1)')
    return z


def jost_identities(
        c: CoefficientData,
        z: complex,
        window: Sequence[int] = None,
        *,
        series: JostSeriesData = None,
        tol: Tolerances = None,
) -> Dict[str, float]:
    """Residuals of ``W(U±(z̄)*, U±(z⁻¹)) = ±(z⁻¹ − z)I`` and
    ``W(U±(z̄)*, U±(z)) = 0``, relative to ``max(1, |z⁻¹ − z|)``."""
    tol = tol or DEFAULT_TOLERANCES
    z = _check_point(z, tol)
    window = window or default_window(c)
    gap = 1 / z - z
    identity = np.eye(c.dim)
    residuals = {}
    for species in Species:
        left = adjoint_conjugate_solution(c, species, z, window, series)
        inverse = _solution(c, species, 1 / z, window, series)
        same = _solution(c, species, z, window, series)
        w = wronskian_constant(c, left, inverse, tol=tol).value
        residuals[f'{species.value}_inverse'] = opnorm(w - species.sign * gap * identity) / max(1.0, abs(gap))
        w = wronskian_constant(c, left, same, tol=tol).value
        residuals[f'{species.value}_same'] = opnorm(w) / max(1.0, abs(gap))
    return residuals


def green_identity(
        c: CoefficientData,
        u: OperatorSolution,
        v: OperatorSolution,
        n: int,
        m: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Both sides of the summation-by-parts identity

    ``W_{m+1}(U, V) − W_n(U, V) = Σ_{j=n}^{m} U_j(τV)_j − (τU*)_j* V_j``

    for arbitrary block sequences on a common window.
    """
    if u.window != v.window:
        raise WronskianError('Both sequences must share a window')
    if n - 1 < u.lo or m + 1 > u.hi or n > m:
        raise WronskianError(f'[{n - 1}, {m + 1}] must lie in the window {u.window}')
    lhs = wronskian_at(c, u, v, m + 1) - wronskian_at(c, u, v, n)

    tau_v = apply_operator(c, v.blocks, v.lo)
    u_star = np.conj(np.swapaxes(u.blocks, -1, -2))
    tau_u_star = np.conj(np.swapaxes(apply_operator(c, u_star, u.lo), -1, -2))
    j = slice(n - u.lo, m - u.lo + 1)
    rhs = np.sum(u.blocks[j] @ tau_v[j] - tau_u_star[j] @ v.blocks[j], axis=0)
    return lhs, rhs


def christoffel_darboux(
        c: CoefficientData,
        z: complex,
        z2: complex,
        n: int,
        window: Sequence[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Both sides of ``W_{n+1} − W_n = (λ′ − λ)U_n(z̄)*V_n(z′)`` with
    ``U = U⁺`` at ``λ = z + 1/z`` and ``V = U⁻`` at ``λ′ = z2 + 1/z2``."""
    window = window or default_window(c)
    left = adjoint_conjugate_solution(c, Species.PLUS, z, window)
    right = jost_recursion(c, Species.MINUS, z2, window)
    lhs = wronskian_at(c, left, right, n + 1) - wronskian_at(c, left, right, n)
    lam, lam2 = z + 1 / z, z2 + 1 / z2
    return lhs, (lam2 - lam) * left[n] @ right[n]


def alpha_beta(
        c: CoefficientData,
        z: complex,
        window: Sequence[int] = None,
        *,
        series: JostSeriesData = None,
        tol: Tolerances = None,
) -> ConnectionCoefficients:
    """The connection coefficients at `z`::

        α⁺(z) = W(U⁺(z̄)*, U⁻(z)) / (z⁻¹ − z)
        β⁺(z) = W(U⁺(z̄⁻¹)*, U⁻(z)) / (z − z⁻¹)
        α⁻(z) = W(U⁻(z̄)*, U⁺(z)) / (z − z⁻¹)
        β⁻(z) = W(U⁻(z̄⁻¹)*, U⁺(z)) / (z⁻¹ − z)

    :raise WronskianError: if `z` is ``0`` or ``±1``
    """
    tol = tol or DEFAULT_TOLERANCES
    z = _check_point(z, tol)
    window = window or default_window(c)
    gap = 1 / z - z

    solutions = {
        (species, inverse): _solution(c, species, 1 / z if inverse else z, window, series)
        for species in Species for inverse in (False, True)
    }
    wronskians = {}
    coefficients = {}
    for species in Species:
        other = solutions[species.opposite, False]
        sign = species.sign
        w_alpha = wronskian_constant(c, adjoint_conjugate_solution(c, species, z, window, series), other, tol=tol)
        w_beta = wronskian_constant(c, adjoint_conjugate_solution(c, species, 1 / z, window, series), other, tol=tol)
        wronskians[f'alpha_{species.value}'] = w_alpha
        wronskians[f'beta_{species.value}'] = w_beta
        coefficients[f'alpha_{species.value}'] = w_alpha.value / (sign * gap)
        coefficients[f'beta_{species.value}'] = w_beta.value / (-sign * gap)

    residual = 0.0
    for species in Species:
        target = solutions[species.opposite, False]
        expansion = (
                solutions[species, True].blocks @ coefficients[f'alpha_{species.value}'] +
                solutions[species, False].blocks @ coefficients[f'beta_{species.value}']
        )
        residual = max(residual, float(np.max(opnorm(target.blocks - expansion))) / target.max_norm())
    LOGGER.debug('Connection coefficients at z = %s: expansion residual %.3e', z, residual)
    if residual > tol.algebra_tol:
        LOGGER.warning('Connection coefficients at z = %s do not reproduce the Jost solutions: residual %.3e',
                       z, residual)

    return ConnectionCoefficients(z, residual=residual, wronskians=wronskians, **coefficients)


def _member(
        c: CoefficientData,
        z: complex,
        member: Tuple[Species, bool],
        window: Sequence[int],
        series: Optional[JostSeriesData],
) -> Tuple[OperatorSolution, OperatorSolution]:
    """A basis member and its left form ``{U(w̄)*}``, ``w = z`` or ``z⁻¹``."""
    species, inverse = member
    w = 1 / z if inverse else z
    return (
        _solution(c, species, w, window, series),
        adjoint_conjugate_solution(c, species, w, window, series),
    )


def fundamental_matrix(
        c: CoefficientData,
        z: complex,
        j: int,
        basis: Basis,
        window: Sequence[int] = None,
) -> np.ndarray:
    """``Y_j = [[R_j, R̂_j], [R_{j+1}, R̂_{j+1}]]`` for the pair ``(R, R̂)``."""
    window = window or default_window(c)
    r, _ = _member(c, z, Basis(basis).members[0], window, None)
    r_hat, _ = _member(c, z, Basis(basis).members[1], window, None)
    return np.block([[r[j], r_hat[j]], [r[j + 1], r_hat[j + 1]]])


def z_operator(
        c: CoefficientData,
        z: complex,
        j: int,
        basis: Basis,
        window: Sequence[int] = None,
        *,
        series: JostSeriesData = None,
        tol: Tolerances = None,
) -> np.ndarray:
    """The left inverse ``Z_j`` of ``Y_j``: for every solution ``V`` at
    ``λ = z + 1/z``, ``[P; Q] = Z_j [V_j; V_{j+1}]`` gives ``V = RP + R̂Q``.

    ``Z_j = diag(−W(R̂(z̄)*, R)⁻¹, W(R(z̄)*, R̂)⁻¹) ·
    [[R̂_{j+1}(z̄)*A_j, −R̂_j(z̄)*A_j], [−R_{j+1}(z̄)*A_j, R_j(z̄)*A_j]]``

    :raise SingularWronskianError: if either Wronskian is not invertible
    :raise WronskianError: if ``Z_jY_j`` departs from the identity
    """
    tol = tol or DEFAULT_TOLERANCES
    z = _check_point(z, tol)
    window = window or default_window(c)
    if not window[0] <= j < window[1]:
        raise WronskianError(f'j = {j} needs j and j + 1 in the window {tuple(window)}')
    basis = Basis(basis)
    r, r_left = _member(c, z, basis.members[0], window, series)
    r_hat, r_hat_left = _member(c, z, basis.members[1], window, series)

    w1 = wronskian_constant(c, r_hat_left, r, tol=tol)
    w2 = wronskian_constant(c, r_left, r_hat, tol=tol)
    for name, w in (('W(R̂(z̄)*, R)', w1), ('W(R(z̄)*, R̂)', w2)):
        if not w.is_invertible(tol):
            raise SingularWronskianError(f'{name} is not invertible at z = {z} for basis {basis.value}')

    a = c.a(j)
    z_j = np.block([
        [-np.linalg.inv(w1.value) @ r_hat_left[j + 1] @ a, np.linalg.inv(w1.value) @ r_hat_left[j] @ a],
        [-np.linalg.inv(w2.value) @ r_left[j + 1] @ a, np.linalg.inv(w2.value) @ r_left[j] @ a],
    ])
    y_j = np.block([[r[j], r_hat[j]], [r[j + 1], r_hat[j + 1]]])
    defect = opnorm(z_j @ y_j - np.eye(2 * c.dim))
    if defect > tol.identity_tol * max(1.0, opnorm(z_j) * opnorm(y_j)):
        raise WronskianError(f'Z_j Y_j departs from the identity by {defect:.3e}')
    return z_j


def fundamental_solve(
        c: CoefficientData,
        z: complex,
        v: OperatorSolution,
        basis: Basis = Basis.PLUS_PAIR,
        *,
        series: JostSeriesData = None,
        tol: Tolerances = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients ``(P, Q)`` with ``V = R P + R̂ Q`` for the basis pair
    ``(R, R̂)``.

    For ``{U±(z), U±(z⁻¹)}`` these are
    ``P = −W(U±(z̄⁻¹)*, V)/(±(z⁻¹ − z))`` and
    ``Q = W(U±(z̄)*, V)/(±(z⁻¹ − z))``; mixed pairs go through
    :func:`z_operator`. With ``V = U⁻(z)`` and the plus pair the result is
    ``(β⁺(z), α⁺(z))``.
    """
    tol = tol or DEFAULT_TOLERANCES
    z = _check_point(z, tol)
    basis = Basis(basis)
    window = v.window

    if basis in (Basis.PLUS_PAIR, Basis.MINUS_PAIR):
        species = basis.members[0][0]
        gap = species.sign * (1 / z - z)
        w_p = wronskian_constant(c, adjoint_conjugate_solution(c, species, 1 / z, window, series), v, tol=tol)
        w_q = wronskian_constant(c, adjoint_conjugate_solution(c, species, z, window, series), v, tol=tol)
        return -w_p.value / gap, w_q.value / gap

    j = (v.lo + v.hi) // 2
    coefficients = z_operator(c, z, j, basis, window, series=series, tol=tol) @ np.concatenate((v[j], v[j + 1]))
    return coefficients[:c.dim], coefficients[c.dim:]


def expansion_residual(
        c: CoefficientData,
        z: complex,
        v: OperatorSolution,
        basis: Basis,
        p: np.ndarray,
        q: np.ndarray,
) -> float:
    """``max_n ‖V_n − R_n P − R̂_n Q‖ / max_n ‖V_n‖``."""
    basis = Basis(basis)
    r, _ = _member(c, complex(z), basis.members[0], v.window, None)
    r_hat, _ = _member(c, complex(z), basis.members[1], v.window, None)
    defect = v.blocks - r.blocks @ p - r_hat.blocks @ q
    return float(np.max(opnorm(defect))) / v.max_norm()
