"""Jost solutions ``U⁺(z)`` and ``U⁻(z)``.

Two constructions are provided and cross-checked: the exact three-term
recursion started in the free region, and the series

``U⁺_n(z) = T_n zⁿ (I + Σ_m K_{n,m} z^m)``,
``U⁻_n(z) = R_n z^{−n} (I + Σ_m M_{n,m} z^m)``,

whose coefficients are finite at finite support.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from jacobiscat.coefficients import CoefficientData, apply_operator
from jacobiscat.exc import JostError
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import opnorm

__all__ = [
    'Species',
    'OperatorSolution',
    'JostSeriesData',
    'default_window',
    'jost_plus_recursion',
    'jost_minus_recursion',
    'jost_recursion',
    'jost_recursion_grid',
    'solve_recursion',
    'recursion_residual',
    'build_series_data',
    'jost_plus_series',
    'jost_minus_series',
    'jost_series',
    'series_derivative',
    'delta_jost',
    'tail_constant',
    'tail_bound',
    'tail_bound_log',
    'truncation_cut',
    'remainder_profile',
    'empirical_decay_rate',
]

LOGGER = logging.getLogger(__name__)

Window = Tuple[int, int]


class Species(str, Enum):
    PLUS = 'plus'
    MINUS = 'minus'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}.{self.name}'

    @property
    def sign(self) -> int:
        return 1 if self is Species.PLUS else -1

    @property
    def opposite(self) -> Species:
        return Species.MINUS if self is Species.PLUS else Species.PLUS


class OperatorSolution:
    """A window ``{U_n}``, ``n ∈ [lo, hi]``, of operator blocks.

    Blocks are stored as a read-only array of shape ``(hi − lo + 1, d, k)``.
    """

    def __init__(
            self,
            z: complex,
            lo: int,
            blocks: np.ndarray,
            species: Optional[Species] = None,
            adjoint: bool = False,
    ) -> None:
        self.z: complex = complex(z)
        """The point at which the solution was evaluated."""

        self.species: Optional[Species] = species
        """``PLUS`` or ``MINUS`` for Jost solutions, ``None`` otherwise."""

        self.adjoint: bool = adjoint
        """Whether the blocks are adjoints ``U_n*`` of a solution's blocks."""

        self.lo: int = lo
        self.blocks: np.ndarray = np.array(blocks, dtype=complex)
        self.blocks.setflags(write=False)

    @property
    def hi(self) -> int:
        return self.lo + len(self.blocks) - 1

    @property
    def window(self) -> Window:
        return self.lo, self.hi

    @property
    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __getitem__(self, n: int) -> np.ndarray:
        if n not in self:
            raise JostError(f'Index {n} lies outside the window [{self.lo}, {self.hi}]')
        return self.blocks[n - self.lo]

    def __len__(self) -> int:
        return len(self.blocks)

    def __repr__(self) -> str:
        return (f'{self.__class__.__name__}(z={self.z!r}, window={self.window}, '
                f'species={self.species!r}, adjoint={self.adjoint})')

    def max_norm(self) -> float:
        return float(np.max(opnorm(self.blocks))) if len(self.blocks) else 0.0

    def as_array(self) -> np.ndarray:
        return self.blocks

    def conjugate_transpose(self) -> OperatorSolution:
        """Blockwise adjoint ``{U_n*}``."""
        return OperatorSolution(self.z, self.lo, np.conj(np.swapaxes(self.blocks, -1, -2)),
                                self.species, not self.adjoint)

    def times(self, p: np.ndarray) -> OperatorSolution:
        """Right multiplication ``{U_n P}``."""
        return OperatorSolution(self.z, self.lo, self.blocks @ p, None, self.adjoint)

    def restrict(self, lo: int, hi: int) -> OperatorSolution:
        if lo < self.lo or hi > self.hi:
            raise JostError(f'[{lo}, {hi}] is not inside the window [{self.lo}, {self.hi}]')
        return OperatorSolution(self.z, lo, self.blocks[lo - self.lo:hi - self.lo + 1], self.species, self.adjoint)


def default_window(c: CoefficientData) -> Window:
    """``[n_min − 5, n_max + 5]``."""
    return c.n_min - 5, c.n_max + 5


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise JostError('Jost solutions are undefined at z = 0')
    if abs(z) > 1:
        LOGGER.debug('Evaluating at |z| = %.6g > 1 (exponential mode)', abs(z))
    return z


def _check_window(window: Optional[Sequence[int]], c: CoefficientData) -> Window:
    if window is None:
        return default_window(c)
    lo, hi = window
    if lo > hi:
        raise JostError(f'Empty window [{lo}, {hi}]')
    return int(lo), int(hi)


def _plus_grid(c: CoefficientData, zs: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Backward recursion from the free region ``n ≥ n_max + 1``,
    vectorized over the points `zs`."""
    d = c.dim
    seed = c.n_max + 1
    bottom = min(lo, seed)
    top = max(hi, seed + 1)
    ns = np.arange(bottom, top + 1)

    zs = zs.reshape(-1, 1, 1, 1)
    u = np.zeros((zs.shape[0], len(ns), d, d), dtype=complex)
    free = ns >= seed
    u[:, free] = zs ** ns[free].reshape(1, -1, 1, 1) * np.eye(d)

    lam = (zs + 1 / zs)[:, 0]
    for n in range(seed, bottom, -1):
        i = n - bottom
        rhs = lam * u[:, i] - c.b(n) @ u[:, i] - c.a(n) @ u[:, i + 1]
        u[:, i - 1] = c.a_inv(n - 1) @ rhs

    return u[:, lo - bottom:hi - bottom + 1]


def _minus_grid(c: CoefficientData, zs: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Forward recursion from the free region ``n ≤ n_min − 1``."""
    d = c.dim
    seed = c.n_min - 1
    bottom = min(lo, seed - 1)
    top = max(hi, seed)
    ns = np.arange(bottom, top + 1)

    zs = zs.reshape(-1, 1, 1, 1)
    u = np.zeros((zs.shape[0], len(ns), d, d), dtype=complex)
    free = ns <= seed
    u[:, free] = zs ** (-ns[free]).reshape(1, -1, 1, 1) * np.eye(d)

    lam = (zs + 1 / zs)[:, 0]
    for n in range(seed, top):
        i = n - bottom
        rhs = lam * u[:, i] - c.b(n) @ u[:, i] - c.a(n - 1) @ u[:, i - 1]
        u[:, i + 1] = c.a_inv(n) @ rhs

    return u[:, lo - bottom:hi - bottom + 1]


def jost_recursion_grid(
        c: CoefficientData,
        species: Species,
        zs: Iterable[complex],
        window: Sequence[int] = None,
) -> np.ndarray:
    """Evaluate a Jost solution by recursion at many points at once.

    :return: array of shape ``(len(zs), hi − lo + 1, d, d)``
    """
    zs = np.asarray(list(zs), dtype=complex)
    if np.any(zs == 0):
        raise JostError('Jost solutions are undefined at z = 0')
    lo, hi = _check_window(window, c)
    grid = _plus_grid if Species(species) is Species.PLUS else _minus_grid
    return grid(c, zs, lo, hi)


def jost_plus_recursion(c: CoefficientData, z: complex, window: Sequence[int] = None) -> OperatorSolution:
    """``U⁺(z)`` on `window` by backward recursion from ``U⁺_n = zⁿI``,
    ``n ≥ n_max + 1``."""
    z = _check_z(z)
    lo, hi = _check_window(window, c)
    return OperatorSolution(z, lo, _plus_grid(c, np.array([z]), lo, hi)[0], Species.PLUS)


def jost_minus_recursion(c: CoefficientData, z: complex, window: Sequence[int] = None) -> OperatorSolution:
    """``U⁻(z)`` on `window` by forward recursion from ``U⁻_n = z^{−n}I``,
    ``n ≤ n_min − 1``."""
    z = _check_z(z)
    lo, hi = _check_window(window, c)
    return OperatorSolution(z, lo, _minus_grid(c, np.array([z]), lo, hi)[0], Species.MINUS)


def jost_recursion(
        c: CoefficientData,
        species: Species,
        z: complex,
        window: Sequence[int] = None,
) -> OperatorSolution:
    if Species(species) is Species.PLUS:
        return jost_plus_recursion(c, z, window)
    return jost_minus_recursion(c, z, window)


def solve_recursion(
        c: CoefficientData,
        z: complex,
        n0: int,
        u0: np.ndarray,
        u1: np.ndarray,
        window: Sequence[int] = None,
) -> OperatorSolution:
    """The solution at ``λ = z + 1/z`` with ``U_{n0} = u0`` and
    ``U_{n0+1} = u1``, continued in both directions over `window`."""
    z = _check_z(z)
    lo, hi = _check_window(window, c)
    if not lo <= n0 < hi:
        raise JostError(f'The initial indices {n0}, {n0 + 1} must lie in [{lo}, {hi}]')
    lam = z + 1 / z
    u0 = np.asarray(u0, dtype=complex)
    u = np.zeros((hi - lo + 1,) + u0.shape, dtype=complex)
    u[n0 - lo] = u0
    u[n0 + 1 - lo] = u1
    for n in range(n0 + 1, hi):
        i = n - lo
        u[i + 1] = c.a_inv(n) @ (lam * u[i] - c.b(n) @ u[i] - c.a(n - 1) @ u[i - 1])
    for n in range(n0, lo, -1):
        i = n - lo
        u[i - 1] = c.a_inv(n - 1) @ (lam * u[i] - c.b(n) @ u[i] - c.a(n) @ u[i + 1])
    return OperatorSolution(z, lo, u)


def recursion_residual(c: CoefficientData, u: OperatorSolution) -> float:
    """``max_n ‖A_{n−1}U_{n−1} + (B_n − λ)U_n + A_nU_{n+1}‖ / max_n ‖U_n‖``
    over the interior of the window."""
    if len(u) < 3:
        return 0.0
    lam = u.z + 1 / u.z
    r = apply_operator(c, u.blocks, u.lo)[1:-1] - lam * u.blocks[1:-1]
    scale = u.max_norm()
    return float(np.max(opnorm(r))) / scale if scale else 0.0


@dataclass
class _Series:
    """Plus-side series data of one instance: ``T_n`` for ``n ∈ [lo, top]``
    and ``K_{n,m}`` for ``n ∈ [lo, top + 1]``, with ``top = n_max + 1``."""
    lo: int
    top: int
    T: np.ndarray
    K: np.ndarray

    def t(self, n: int) -> np.ndarray:
        return self.T[min(n, self.top) - self.lo]

    def k(self, n: int) -> np.ndarray:
        """``K_{n,0..m_max}``, with ``K_{n,0} = I``."""
        return self.K[min(n, self.top) - self.lo]


def _plus_series(c: CoefficientData, lo: int, tol: Tolerances) -> _Series:
    d = c.dim
    identity = np.eye(d)
    top = c.n_max + 1
    lo = min(lo, top)
    m_max = 2 * (c.n_max - lo) + 2
    count = top - lo + 1

    t = np.empty((count, d, d), dtype=complex)
    t_inv = np.empty((count, d, d), dtype=complex)
    t[-1] = t_inv[-1] = identity
    for n in range(top - 1, lo - 1, -1):
        i = n - lo
        t[i] = c.a_inv(n) @ t[i + 1]
        t_inv[i] = t_inv[i + 1] @ c.a(n)

    k = np.zeros((count + 1, m_max + 1, d, d), dtype=complex)
    k[:, 0] = identity

    s1 = np.zeros((m_max + 1, d, d), dtype=complex)
    s2 = np.zeros((m_max + 1, d, d), dtype=complex)
    for n in range(top - 1, lo - 1, -1):
        p = n + 1
        i = p - lo
        x = t_inv[i] @ c.b(p) @ t[i]
        y = t_inv[i] @ (identity - c.a(p) @ c.a(p)) @ t[i]
        s1 += x @ k[i]
        s2 += y @ k[i + 1]

        row = k[n - lo]
        row[1] = -s1[0]
        if m_max >= 2:
            row[2] = -s1[1] + s2[0]
        if m_max >= 3:
            row[3:] = -s1[2:m_max] + s2[1:m_max - 1] + k[i, 1:m_max - 1]

    scale = max(1.0, float(np.max(np.abs(k))))
    for n in range(lo, top):
        degree = 2 * (c.n_max - n)
        slack = float(np.max(np.abs(k[n - lo, degree + 1:]), initial=0.0))
        if slack > tol.series_slack_tol * scale:
            raise JostError(f'Series coefficients K_{{{n},m}} do not vanish past degree {degree} '
                            f'(max slack {slack:.3g})')

    LOGGER.debug('Built series over [%d, %d] with m_max = %d', lo, top, m_max)
    return _Series(lo, top, t, k)


class JostSeriesData:
    """The products ``T_n``, ``R_n`` and series coefficients ``K_{n,m}``,
    ``M_{n,m}`` of an instance.

    ``T_n = A_n⁻¹A_{n+1}⁻¹⋯A_{n_max}⁻¹`` and ``R_n = A_{n−1}⁻¹⋯A_{n_min−1}⁻¹``;
    ``K_{n,m}`` vanishes for ``n ≥ n_max`` or ``m > 2(n_max − n)``, and
    ``M_{n,m}`` for ``n ≤ n_min`` or ``m > 2(n − n_min)``.
    """

    def __init__(self, c: CoefficientData, window: Sequence[int] = None, *, tol: Tolerances = None) -> None:
        tol = tol or DEFAULT_TOLERANCES
        lo, hi = _check_window(window, c)
        self.dim: int = c.dim
        self.n_min: int = c.n_min
        self.n_max: int = c.n_max
        self._plus = _plus_series(c, lo, tol)
        # the minus side is the plus side of the reflected instance, read at −n
        self._minus = _plus_series(c.reflected(), -hi, tol)

    @property
    def lo(self) -> int:
        """Lowest index at which the plus-side series is available."""
        return self._plus.lo

    @property
    def hi(self) -> int:
        """Highest index at which the minus-side series is available."""
        return -self._minus.lo

    @property
    def m_max(self) -> int:
        return self._plus.K.shape[1] - 1

    @property
    def m_max_minus(self) -> int:
        return self._minus.K.shape[1] - 1

    def t_block(self, n: int) -> np.ndarray:
        self._check(n, Species.PLUS)
        return self._plus.t(n)

    def r_block(self, n: int) -> np.ndarray:
        self._check(n, Species.MINUS)
        return self._minus.t(-n)

    def k_block(self, n: int, m: int) -> np.ndarray:
        self._check(n, Species.PLUS)
        coefficients = self._plus.k(n)
        return coefficients[m] if m < len(coefficients) else np.zeros_like(coefficients[0])

    def m_block(self, n: int, m: int) -> np.ndarray:
        self._check(n, Species.MINUS)
        coefficients = self._minus.k(-n)
        return coefficients[m] if m < len(coefficients) else np.zeros_like(coefficients[0])

    def coefficients(self, species: Species, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """``(T_n, K_{n,0..})`` or ``(R_n, M_{n,0..})``, with the zeroth
        series coefficient equal to ``I``."""
        self._check(n, species)
        series, index = (self._plus, n) if Species(species) is Species.PLUS else (self._minus, -n)
        return series.t(index), series.k(index)

    def _check(self, n: int, species: Species) -> None:
        if Species(species) is Species.PLUS and n < self.lo:
            raise JostError(f'Plus-side series data not built below n = {self.lo}')
        if Species(species) is Species.MINUS and n > self.hi:
            raise JostError(f'Minus-side series data not built above n = {self.hi}')


def build_series_data(c: CoefficientData, window: Sequence[int] = None, *, tol: Tolerances = None) -> JostSeriesData:
    """Compute ``T``, ``R``, ``K`` and ``M`` for evaluation on `window`.

    :raise JostError: if a series coefficient past its proved degree
        fails to vanish
    """
    return JostSeriesData(c, window, tol=tol)


def _series_values(
        s: JostSeriesData,
        species: Species,
        z: complex,
        lo: int,
        hi: int,
        derivative: bool = False,
) -> np.ndarray:
    sign = Species(species).sign
    values = []
    for n in range(lo, hi + 1):
        t, k = s.coefficients(species, n)
        m = np.arange(len(k))
        # U_n(z) = T_n Σ_m K_{n,m} z^{m ± n}
        powers = m + sign * n
        if derivative:
            weights = powers * np.power(z, powers - 1)
        else:
            weights = np.power(z, powers)
        values.append(t @ np.tensordot(weights, k, axes=(0, 0)))
    return np.array(values)


def jost_series(
        c: CoefficientData,
        s: JostSeriesData,
        species: Species,
        z: complex,
        window: Sequence[int] = None,
) -> OperatorSolution:
    z = _check_z(z)
    lo, hi = _check_window(window, c)
    return OperatorSolution(z, lo, _series_values(s, species, z, lo, hi), Species(species))


def jost_plus_series(c: CoefficientData, s: JostSeriesData, z: complex, window: Sequence[int] = None) -> OperatorSolution:
    """``U⁺(z)`` on `window` from ``T_n zⁿ (I + Σ K_{n,m} z^m)``."""
    return jost_series(c, s, Species.PLUS, z, window)


def jost_minus_series(c: CoefficientData, s: JostSeriesData, z: complex, window: Sequence[int] = None) -> OperatorSolution:
    """``U⁻(z)`` on `window` from ``R_n z^{−n} (I + Σ M_{n,m} z^m)``."""
    return jost_series(c, s, Species.MINUS, z, window)


def series_derivative(
        c: CoefficientData,
        s: JostSeriesData,
        species: Species,
        z: complex,
        window: Sequence[int] = None,
) -> OperatorSolution:
    """Term-by-term ``z``-derivative of the Jost series."""
    z = _check_z(z)
    lo, hi = _check_window(window, c)
    return OperatorSolution(z, lo, _series_values(s, species, z, lo, hi, derivative=True), Species(species))


def delta_jost(
        c: CoefficientData,
        s: JostSeriesData,
        z0: int,
        z: complex,
        window: Sequence[int] = None,
        species: Species = Species.PLUS,
) -> OperatorSolution:
    """``δU(z)`` in ``U_n(z) = U_n(z0) + (z − z0)δU_n(z)``, for ``z0 = ±1``.

    For ``z ≠ z0`` this is the blockwise difference quotient; at
    ``z = z0`` it is the derivative of the series.
    """
    if z0 not in (1, -1):
        raise JostError(f'z0 must be +1 or -1, got {z0!r}')
    z = complex(z)
    if z == z0:
        return series_derivative(c, s, species, z0, window)
    u = jost_series(c, s, species, z, window)
    u0 = jost_series(c, s, species, z0, window)
    return OperatorSolution(z, u.lo, (u.blocks - u0.blocks) / (z - z0), Species(species))


def _frame_constant(c: CoefficientData) -> float:
    """The constant ``𝒞 ≥ ‖T_j‖ + ‖T_j⁻¹‖ + ‖I + A_j‖ + Σ(|n| + 1)(‖I − A_n‖ + ‖B_n‖)``."""
    identity = np.eye(c.dim)
    t = identity
    best = 4.0
    for j in range(c.n_max, c.n_min - 2, -1):
        t = c.a_inv(j) @ t
        best = max(best, opnorm(t) + opnorm(np.linalg.inv(t)) + opnorm(identity + c.a(j)))
    return best + sum((abs(n) + 1) * w for n, w in c.deviations())


def _log_tail_constant(c: CoefficientData, n: int, m: int = None) -> float:
    frame = _frame_constant(c)
    w = dict(c.deviations())
    if m is None:
        return 5 * math.log(frame) + frame ** 3 * sum((p - n) * wp for p, wp in w.items() if p >= n + 1)
    if m < 1:
        raise ValueError('m must be positive')
    if m == 1:
        return 2 * math.log(frame)
    log_c = 5 * math.log(frame)
    for q in range(n + 1, n + m - 1):
        log_c += math.log1p(frame ** 3 * sum(wp for p, wp in w.items() if p >= q))
    return log_c


def tail_constant(c: CoefficientData, n: int, m: int = None) -> float:
    """The constant ``C_n = 𝒞⁵ exp(𝒞³ Σ_{p>n} (p − n)(‖I − A_p‖ + ‖B_p‖))``
    bounding every ``K_{n,m}``, or with `m` the finer recursive constant
    ``C_{n,m}``. Returns ``inf`` on overflow."""
    try:
        return math.exp(_log_tail_constant(c, n, m))
    except OverflowError:
        return math.inf


def tail_bound_log(c: CoefficientData, n: int, window_cut: int, refined: bool = False) -> float:
    """Natural logarithm of :func:`tail_bound`; ``-inf`` when the bound is zero."""
    if not c.support or window_cut >= 2 * (c.n_max - n):
        return -math.inf
    w = dict(c.deviations())

    def suffix(q: int) -> float:
        return sum(wp for p, wp in w.items() if p >= q)

    if refined:
        terms = [
            _log_tail_constant(c, n, m) + math.log(suffix(n + m // 2))
            for m in range(window_cut + 1, 2 * (c.n_max - n) + 2)
            if suffix(n + m // 2) > 0
        ]
    else:
        # Σ_{m>cut} Σ_{p ≥ n+⌊m/2⌋} w_p counts w_p once for each m ≤ 2(p − n) + 1
        total = sum(max(0, 2 * (p - n) + 1 - window_cut) * wp for p, wp in w.items() if p >= n)
        terms = [_log_tail_constant(c, n) + math.log(total)] if total > 0 else []
    if not terms:
        return -math.inf
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def tail_bound(c: CoefficientData, n: int, window_cut: int, refined: bool = False) -> float:
    """Certified upper bound on ``Σ_{m > window_cut} ‖K_{n,m}‖`` (the
    remainder of the series at ``|z| = 1`` after `window_cut` terms).

    Each term obeys ``‖K_{n,m}‖ ≤ C_n Σ_{p ≥ n+⌊m/2⌋}(‖I − A_p‖ + ‖B_p‖)``;
    with `refined` the finer constants ``C_{n,m}`` are used instead. At
    finite support the bound is zero once `window_cut` reaches the degree
    ``2(n_max − n)`` of the series. Returns ``inf`` on overflow.
    """
    log_bound = tail_bound_log(c, n, window_cut, refined)
    if log_bound == -math.inf:
        return 0.0
    try:
        return math.exp(log_bound)
    except OverflowError:
        return math.inf


def truncation_cut(c: CoefficientData, n: int, tol: float, refined: bool = False) -> int:
    """Smallest number of series terms whose certified remainder at
    index `n` is at most `tol`."""
    cut = 0
    while tail_bound(c, n, cut, refined) > tol:
        cut += 1
    LOGGER.debug('Truncation at n = %d needs %d terms for tolerance %g', n, cut, tol)
    return cut


def remainder_profile(c: CoefficientData, z: complex, ns: Sequence[int]) -> List[float]:
    """``‖z^{−n}U⁺_n(z) − I‖`` for each `n` in `ns`."""
    ns = list(ns)
    u = jost_plus_recursion(c, z, (min(ns), max(ns)))
    identity = np.eye(c.dim)
    return [opnorm(u[n] / z ** n - identity) for n in ns]


def empirical_decay_rate(ns: Sequence[int], remainders: Sequence[float]) -> Optional[float]:
    """Least-squares slope of ``log(remainder)`` against ``log(|n| + 1)``
    over the strictly positive remainders; ``None`` if fewer than two."""
    points = [(math.log(abs(n) + 1), math.log(r)) for n, r in zip(ns, remainders) if r > 0]
    if len(points) < 2 or len({x for x, _ in points}) < 2:
        return None
    x, y = np.array(points).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
