"""Discrete spectrum of a block Jacobi operator.

Eigenvalues ``λ = z + 1/z`` with ``z ∈ (−1, 0) ∪ (0, 1)`` are located three
independent ways:

* :func:`wronskian_scan`: the points where ``W(U⁺(z̄)*, U⁻(z))`` fails to be
  invertible;
* :func:`truncation_eigen`: dense diagonalization of a Dirichlet truncation;
* :func:`bs_zero_scan`: zeros of the Birman–Schwinger determinant
  ``f(z) = det(I + (𝒥₀ − λ)⁻¹V)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize

from jacobiscat.coefficients import (
    CoefficientData, apply_operator, trace_norm_budget, truncated_matrix, zhukovsky_inverse,
)
from jacobiscat.exc import SpectrumError
from jacobiscat.jost import OperatorSolution, Species, jost_recursion_grid
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    'Method',
    'EigenvalueItem',
    'EigenvalueReport',
    'EigenvalueBounds',
    'ReportComparison',
    'EDGE_EXCLUSION',
    'scan_grid',
    'wronskian_singular_values',
    'wronskian_scan',
    'eigenvector',
    'eigenvector_residual',
    'truncation_eigen',
    'free_resolvent_defect',
    'bs_determinant',
    'bs_zero_scan',
    'eigenvalue_bounds',
    'compare_reports',
    'operator_multiplicity',
    'promote_vector_solution',
]

LOGGER = logging.getLogger(__name__)

EDGE_EXCLUSION = 1e-6
"""Eigenvalue points satisfy ``|z| ≤ 1 − EDGE_EXCLUSION``; ``±2`` is never
an eigenvalue."""


class Method(str, Enum):
    WRONSKIAN_SCAN = 'wronskian_scan'
    TRUNCATION = 'truncation'
    DETERMINANT = 'determinant'

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}.{self.name}'


@dataclass(frozen=True)
class EigenvalueItem:
    z: float
    multiplicity: int = 1
    residual: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < abs(self.z) <= 1 - EDGE_EXCLUSION:
            raise SpectrumError(f'z = {self.z} is not the point of an isolated eigenvalue')
        if self.multiplicity < 1:
            raise SpectrumError(f'Invalid multiplicity {self.multiplicity}')

    @property
    def lam(self) -> float:
        return self.z + 1 / self.z


@dataclass
class EigenvalueReport:
    """Eigenvalues found by one method, sorted by ``λ``, with points closer
    than ``dedupe_tol`` merged."""

    method: Method
    items: List[EigenvalueItem] = field(default_factory=list)
    converged: bool = True
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    dedupe_tol: float = DEFAULT_TOLERANCES.dedupe_tol

    def __post_init__(self) -> None:
        self.method = Method(self.method)
        merged: List[EigenvalueItem] = []
        for item in sorted(self.items, key=lambda i: i.z):
            if merged and abs(item.z - merged[-1].z) <= self.dedupe_tol:
                best = min(item, merged[-1], key=lambda i: i.residual)
                merged[-1] = replace(best, multiplicity=max(item.multiplicity, merged[-1].multiplicity))
            else:
                merged.append(item)
        self.items = sorted(merged, key=lambda i: i.lam)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        yield from self.items

    @property
    def zs(self) -> List[float]:
        return [item.z for item in self.items]

    @property
    def lams(self) -> List[float]:
        return [item.lam for item in self.items]

    @property
    def count(self) -> int:
        """The number of eigenvalues counted with multiplicity."""
        return sum(item.multiplicity for item in self.items)

    def within(self, radius: float) -> EigenvalueReport:
        """The sub-report of eigenvalues with ``|z| < radius``."""
        return EigenvalueReport(
            self.method,
            [item for item in self.items if abs(item.z) < radius],
            self.converged,
            dict(self.diagnostics),
            self.dedupe_tol,
        )


def _item(z: float, multiplicity: int, residual: float) -> Optional[EigenvalueItem]:
    if not 0 < abs(z) <= 1 - EDGE_EXCLUSION:
        LOGGER.debug('Discarding candidate z = %.12g outside the eigenvalue region', z)
        return None
    return EigenvalueItem(float(z), int(multiplicity), float(residual))


def scan_grid(grid_size: int, delta: float) -> List[np.ndarray]:
    """The two real scan intervals ``(−1 + δ, −δ)`` and ``(δ, 1 − δ)``."""
    if grid_size < 3:
        raise SpectrumError(f'Grid size {grid_size} is too small to bracket anything')
    if not 0 < delta < 0.5:
        raise SpectrumError(f'Scan margin {delta} must lie in (0, 0.5)')
    return [np.linspace(-1 + delta, -delta, grid_size), np.linspace(delta, 1 - delta, grid_size)]


def wronskian_singular_values(c: CoefficientData, zs: Iterable[float]) -> np.ndarray:
    """Singular values of ``W(U⁺(z)*, U⁻(z)) / |z⁻¹ − z|`` at real points,
    in descending order per point.

    The Wronskian does not depend on the index, so it is evaluated once,
    at ``n = n_max + 1``.

    :return: array of shape ``(len(zs), d)``
    """
    zs = np.asarray(list(zs), dtype=float)
    n = c.n_max + 1
    window = (n - 1, n)
    plus = jost_recursion_grid(c, Species.PLUS, zs, window)
    minus = jost_recursion_grid(c, Species.MINUS, zs, window)
    left = np.conj(np.swapaxes(plus, -1, -2))
    a = c.a(n - 1)
    w = left[:, 0] @ a @ minus[:, 1] - left[:, 1] @ a @ minus[:, 0]
    gap = np.abs(1 / zs - zs).reshape(-1, 1)
    return np.linalg.svd(w, compute_uv=False) / gap


def _refine_minimum(
        fn: Callable[[float], float],
        a: float,
        b: float,
        c: float,
        xtol: float,
) -> float:
    try:
        result = optimize.minimize_scalar(fn, bracket=(a, b, c), method='golden', options={'xtol': xtol})
    except ValueError:
        # plateau at the grid point: the bracket is not strict
        result = optimize.minimize_scalar(fn, bounds=(a, c), method='bounded', options={'xatol': xtol})
    x = float(result.x)
    return min(max(x, a), c)


def _local_minima(values: np.ndarray) -> np.ndarray:
    """Interior grid minima that dip below at least one neighbour by a
    relative 1e-6; rounding noise on a plateau is not a minimum."""
    lower, mid, upper = values[:-2], values[1:-1], values[2:]
    interior = (mid <= lower) & (mid <= upper) & (mid < (1 - 1e-6) * np.maximum(lower, upper))
    return np.flatnonzero(interior) + 1


def wronskian_scan(
        c: CoefficientData,
        grid_size: int = 2000,
        refine_tol: float = None,
        *,
        tol: Tolerances = None,
) -> EigenvalueReport:
    """Locate eigenvalues as the real points where the Wronskian
    ``W(U⁺(z)*, U⁻(z))`` has a nontrivial kernel.

    Local minima of its smallest singular value are refined by
    golden-section search and accepted below `refine_tol` (by default
    ``refine_rel`` times the median over the grid). The multiplicity is
    the number of singular values below ``10³·refine_tol`` at the root.
    """
    tol = tol or DEFAULT_TOLERANCES
    intervals = scan_grid(grid_size, tol.scan_delta)
    sv = [wronskian_singular_values(c, zs) for zs in intervals]
    smallest = [s[:, -1] for s in sv]
    if refine_tol is None:
        refine_tol = tol.refine_rel * float(np.median(np.concatenate(smallest)))

    def objective(x: float) -> float:
        return float(wronskian_singular_values(c, [x])[0, -1])

    items = []
    candidates = 0
    for zs, s in zip(intervals, smallest):
        for i in _local_minima(s):
            candidates += 1
            z = _refine_minimum(objective, zs[i - 1], zs[i], zs[i + 1], tol.root_xtol)
            values = wronskian_singular_values(c, [z])[0]
            LOGGER.debug('Wronskian minimum near z = %.6f refined to %.12f: σ_min = %.3e',
                         zs[i], z, values[-1])
            if values[-1] < refine_tol:
                multiplicity = int(np.count_nonzero(values < 1e3 * refine_tol))
                if (item := _item(z, multiplicity, values[-1])) is not None:
                    items.append(item)

    LOGGER.debug('Wronskian scan: %d candidates, %d accepted (threshold %.3e)',
                 candidates, len(items), refine_tol)
    return EigenvalueReport(Method.WRONSKIAN_SCAN, items, diagnostics={
        'grid_size': grid_size,
        'refine_tol': refine_tol,
        'candidates': candidates,
    }, dedupe_tol=tol.dedupe_tol)


def eigenvector(
        c: CoefficientData,
        z: float,
        multiplicity: int = None,
        *,
        cutoff: float = 1e-13,
        tol: Tolerances = None,
) -> OperatorSolution:
    """The ℓ² eigenvectors at an eigenvalue point `z`, columns ``U⁻_n(z)w``
    for ``w`` spanning the kernel of the Wronskian.

    ``U⁻(z)w`` is continued beyond the support as ``z^{n−N}u_N``, and the
    window is wide enough that the dropped entries are below `cutoff`.
    Columns are normalized to unit ℓ² norm.

    :param multiplicity: number of kernel vectors to use; by default those
        with singular value below ``10³·refine_rel``
    :raise SpectrumError: if the Wronskian at `z` has no kernel
    """
    tol = tol or DEFAULT_TOLERANCES
    z = float(z)
    if not 0 < abs(z) < 1:
        raise SpectrumError(f'Eigenvectors need 0 < |z| < 1, got {z}')

    n = c.n_max + 1
    u_plus = jost_recursion_grid(c, Species.PLUS, [z], (n - 1, n))[0]
    u_minus = jost_recursion_grid(c, Species.MINUS, [z], (n - 1, n))[0]
    a = c.a(n - 1)
    w = u_plus[0].conj().T @ a @ u_minus[1] - u_plus[1].conj().T @ a @ u_minus[0]
    _, sv, vh = np.linalg.svd(w / abs(1 / z - z))
    if multiplicity is None:
        multiplicity = int(np.count_nonzero(sv < 1e3 * tol.refine_rel * max(1.0, sv[0])))
    if multiplicity < 1:
        raise SpectrumError(f'The Wronskian is invertible at z = {z} (σ_min = {sv[-1]:.3e})')
    kernel = vh[-multiplicity:].conj().T

    margin = int(math.ceil(math.log(cutoff) / math.log(abs(z))))
    lo, hi = c.n_min - 1 - margin, n + margin
    left = jost_recursion_grid(c, Species.MINUS, [z], (lo, n))[0] @ kernel
    steps = np.arange(1, hi - n + 1).reshape(-1, 1, 1)
    right = z ** steps * left[-1]
    blocks = np.concatenate((left, right))
    blocks = blocks / np.sqrt(np.sum(np.abs(blocks) ** 2, axis=(0, 1)))
    return OperatorSolution(z, lo, blocks)


def eigenvector_residual(c: CoefficientData, z: float, multiplicity: int = None, *,
                         tol: Tolerances = None) -> float:
    """``max ‖(τ − λ)u‖`` over the normalized eigenvectors at `z`, applied
    matrix-free on the eigenvector window."""
    u = eigenvector(c, z, multiplicity, tol=tol)
    r = apply_operator(c, u.blocks, u.lo) - (z + 1 / z) * u.blocks
    return float(np.max(np.sqrt(np.sum(np.abs(r) ** 2, axis=(0, 1)))))


def _cluster(values: np.ndarray, rel: float) -> List[Tuple[float, int]]:
    clusters: List[List[float]] = []
    for x in np.sort(values):
        if clusters and abs(x - clusters[-1][-1]) <= rel * max(1.0, abs(x)):
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [(float(np.mean(group)), len(group)) for group in clusters]


def _outer_eigenvalues(c: CoefficientData, half_width: int, margin: float) -> np.ndarray:
    values = linalg.eigvalsh(truncated_matrix(c, half_width))
    return values[np.abs(values) > 2 + margin]


def truncation_eigen(
        c: CoefficientData,
        half_width: int = 80,
        margin: float = 1e-6,
        *,
        check_convergence: bool = True,
        tol: Tolerances = None,
) -> EigenvalueReport:
    """Eigenvalues of the Dirichlet truncation to ``[−M, M]`` outside
    ``[−2 − margin, 2 + margin]``; each is compared with the truncation to
    ``[−2M, 2M]`` and the difference is reported as its residual.

    :raise SpectrumError: if `half_width` leaves fewer than 20 indices
        between the support and the truncation edge
    """
    tol = tol or DEFAULT_TOLERANCES
    reach = max(abs(c.n_min - 1), abs(c.n_max)) if c.support else 0
    if half_width < reach + 20:
        raise SpectrumError(f'Half width {half_width} is too small; at least {reach + 20} is needed')

    clusters = _cluster(_outer_eigenvalues(c, half_width, margin), 1e-6)
    reference = _outer_eigenvalues(c, 2 * half_width, margin) if check_convergence else None

    items = []
    worst = 0.0
    for lam, multiplicity in clusters:
        residual = 0.0
        if reference is not None:
            residual = float(np.min(np.abs(reference - lam))) if len(reference) else math.inf
            worst = max(worst, residual)
        z = zhukovsky_inverse(lam).z.real
        if (item := _item(z, multiplicity, residual)) is not None:
            items.append(item)

    converged = worst <= tol.algebra_tol
    if not converged:
        LOGGER.warning('Truncation eigenvalues moved by %.3e between M = %d and M = %d',
                       worst, half_width, 2 * half_width)
    LOGGER.debug('Truncation M = %d: %d eigenvalues outside [-2, 2]', half_width, len(items))
    return EigenvalueReport(Method.TRUNCATION, items, converged, {
        'half_width': half_width,
        'margin': margin,
        'convergence': worst,
    }, dedupe_tol=tol.dedupe_tol)


def _free_kernel(z: complex, ns: np.ndarray) -> np.ndarray:
    """``(𝒥₀ − λ)⁻¹(n, m) = z/(z² − 1)·z^{|n−m|}``, scalar entries."""
    return z / (z * z - 1) * z ** np.abs(ns[:, None] - ns[None, :])


def free_resolvent_defect(z: complex, half_width: int = 200) -> float:
    """``max |((𝒥₀ − λ)G − I)(n, m)|`` for the kernel ``G`` on the
    truncation to ``[−M, M]``, over rows and columns with ``|n| ≤ M/2``."""
    z = complex(z)
    if z == 0 or abs(z) >= 1:
        raise SpectrumError(f'The free resolvent kernel needs 0 < |z| < 1, got {z}')
    ns = np.arange(-half_width, half_width + 1)
    j0 = truncated_matrix(CoefficientData.free(1), half_width)
    g = _free_kernel(z, ns)
    defect = (j0 - (z + 1 / z) * np.eye(len(ns))) @ g - np.eye(len(ns))
    inner = np.abs(ns) <= half_width // 2
    return float(np.max(np.abs(defect[np.ix_(inner, inner)])))


def _perturbation(c: CoefficientData) -> Tuple[np.ndarray, np.ndarray]:
    d = c.dim
    ns = np.arange(c.n_min - 1, c.n_max + 2)
    identity = np.eye(d)
    v = np.zeros((len(ns) * d, len(ns) * d), dtype=complex)
    for i, n in enumerate(ns):
        v[i * d:(i + 1) * d, i * d:(i + 1) * d] = c.b(n)
        if i + 1 < len(ns):
            off = c.a(n) - identity
            v[i * d:(i + 1) * d, (i + 1) * d:(i + 2) * d] = off
            v[(i + 1) * d:(i + 2) * d, i * d:(i + 1) * d] = off.conj().T
    return ns, v


def bs_determinant(c: CoefficientData, z) -> Any:
    """The Birman–Schwinger determinant ``f(z) = det(I + G(z)V)`` on the
    block ``[n_min − 1, n_max + 1]`` carrying ``V = 𝒥 − 𝒥₀``.

    Accepts a scalar or an array of points; ``f(z) → 1`` as ``z → 0``.

    :raise SpectrumError: if any point is ``0`` or ``±1``
    """
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zs == 0) or np.any(zs * zs == 1):
        raise SpectrumError('The determinant is undefined at z = 0 and z = ±1')
    if not c.support:
        f = np.ones(len(zs), dtype=complex)
        return complex(f[0]) if scalar else f

    ns, v = _perturbation(c)
    d = c.dim
    size = len(ns) * d
    g = np.stack([np.kron(_free_kernel(x, ns), np.eye(d)) for x in zs])
    f = np.linalg.det(np.eye(size) + g @ v)
    return complex(f[0]) if scalar else f


def bs_zero_scan(
        c: CoefficientData,
        grid_size: int = 2000,
        refine_tol: float = None,
        *,
        tol: Tolerances = None,
) -> EigenvalueReport:
    """Locate the real zeros of :func:`bs_determinant`.

    Sign changes are bisected to ``root_xtol`` and give simple zeros;
    local minima of ``|f|`` that touch zero without a sign change give
    double zeros when they fall below `refine_tol` (by default
    ``refine_rel`` times the median of ``|f|``).
    """
    tol = tol or DEFAULT_TOLERANCES
    intervals = scan_grid(grid_size, tol.scan_delta)

    def real_f(x: float) -> float:
        return bs_determinant(c, x).real

    def abs_f(x: float) -> float:
        return abs(real_f(x))

    values = [bs_determinant(c, zs) for zs in intervals]
    imag = max(float(np.max(np.abs(f.imag))) for f in values)
    LOGGER.debug('Determinant on the real scan grid: max |Im f| = %.3e', imag)
    values = [f.real for f in values]
    if refine_tol is None:
        refine_tol = tol.refine_rel * float(np.median(np.abs(np.concatenate(values))))

    items = []
    for zs, f in zip(intervals, values):
        sign = np.sign(f)
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
            z = optimize.bisect(real_f, zs[i], zs[i + 1], xtol=tol.root_xtol)
            if (item := _item(z, 1, abs_f(z))) is not None:
                items.append(item)
        for i in np.flatnonzero(f == 0):
            if (item := _item(zs[i], 1, 0.0)) is not None:
                items.append(item)

        magnitude = np.abs(f)
        for i in _local_minima(magnitude):
            if sign[i - 1] * sign[i + 1] <= 0:
                continue
            z = _refine_minimum(abs_f, zs[i - 1], zs[i], zs[i + 1], tol.root_xtol)
            if abs_f(z) <= refine_tol and (item := _item(z, 2, abs_f(z))) is not None:
                items.append(item)

    origin = np.array([1e-3, 1e-4])
    origin_rate = float(np.max(np.abs(bs_determinant(c, origin) - 1) / origin))
    LOGGER.debug('Determinant scan: %d zeros', len(items))
    return EigenvalueReport(Method.DETERMINANT, items, diagnostics={
        'grid_size': grid_size,
        'imaginary_part': imag,
        'origin_rate': origin_rate,
        'refine_tol': refine_tol,
    }, dedupe_tol=tol.dedupe_tol)


@dataclass
class EigenvalueBounds:
    """Both sides of the eigenvalue product bound

    ``Π_{|z_j|<R} R/|z_j| ≤ exp(|R/(1−R²)|·(2Σ‖A_n−I‖₁ + Σ‖B_n‖₁))``

    and of the derived count bound ``J(r) ≤ ln(rhs)/ln(R/r)``, where
    ``J(r)`` counts eigenvalues with ``|z_j| < r``.
    """

    radius: float
    count_radius: float
    product_lhs: float
    product_rhs: float
    count_lhs: int
    count_rhs: float

    @property
    def product_holds(self) -> bool:
        return self.product_lhs <= self.product_rhs * (1 + 1e-12)

    @property
    def count_holds(self) -> bool:
        return self.count_lhs <= self.count_rhs + 1e-12

    @property
    def holds(self) -> bool:
        return self.product_holds and self.count_holds


def eigenvalue_bounds(
        c: CoefficientData,
        radius: float,
        report: EigenvalueReport,
        count_radius: float = None,
) -> EigenvalueBounds:
    """Evaluate the product and count bounds at radius ``R``.

    :param report: all eigenvalues with ``|z| < R``; see
        :meth:`EigenvalueReport.within`
    :param count_radius: ``r < R``, by default ``R/2``
    :raise SpectrumError: if ``R ∉ (0, 1)``, ``r ∉ (0, R)``, or an item has
        ``|z| ≥ R``
    """
    if not 0 < radius < 1:
        raise SpectrumError(f'The radius must lie in (0, 1), got {radius}')
    r = radius / 2 if count_radius is None else count_radius
    if not 0 < r < radius:
        raise SpectrumError(f'The count radius must lie in (0, {radius}), got {r}')
    outside = [item.z for item in report.items if abs(item.z) >= radius]
    if outside:
        raise SpectrumError(f'Report items {outside} lie outside |z| < {radius}')

    log_lhs = sum(item.multiplicity * math.log(radius / abs(item.z)) for item in report.items)
    log_rhs = abs(radius / (1 - radius * radius)) * trace_norm_budget(c)
    bounds = EigenvalueBounds(
        radius=radius,
        count_radius=r,
        product_lhs=math.exp(log_lhs),
        product_rhs=math.exp(log_rhs) if log_rhs < 700 else math.inf,
        count_lhs=sum(item.multiplicity for item in report.items if abs(item.z) < r),
        count_rhs=log_rhs / math.log(radius / r),
    )
    LOGGER.debug('Eigenvalue bounds at R = %g: %s', radius, bounds)
    return bounds


@dataclass
class ReportComparison:
    """Eigenvalue points matched across reports.

    Each row maps a method name to its point ``z`` (``None`` where the
    method found nothing) together with the largest pairwise difference.
    """

    methods: List[Method]
    rows: List[Dict[str, Any]]
    max_diff: float
    counts: Dict[str, int]

    @property
    def agree(self) -> bool:
        return all(row['diff'] is not None for row in self.rows) and len(set(self.counts.values())) <= 1


def compare_reports(*reports: EigenvalueReport, match_tol: float = 1e-4, agree_tol: float = 1e-6) -> ReportComparison:
    """Match eigenvalue points across `reports`; points within
    `match_tol` are considered the same eigenvalue, and a row agrees when
    every method has a point and they differ by at most `agree_tol`."""
    points = sorted((item.z, report.method.value) for report in reports for item in report.items)
    groups: List[List[Tuple[float, str]]] = []
    for z, method in points:
        if groups and abs(z - groups[-1][-1][0]) <= match_tol:
            groups[-1].append((z, method))
        else:
            groups.append([(z, method)])

    rows = []
    max_diff = 0.0
    for group in groups:
        row: Dict[str, Any] = {report.method.value: None for report in reports}
        for z, method in group:
            row[method] = z
        found = [z for z, _ in group]
        diff = max(found) - min(found)
        complete = all(row[report.method.value] is not None for report in reports)
        row['lam'] = float(np.mean([z + 1 / z for z in found]))
        row['diff'] = diff if complete and diff <= agree_tol else None
        max_diff = max(max_diff, diff if complete else math.inf)
        rows.append(row)

    return ReportComparison(
        methods=[report.method for report in reports],
        rows=rows,
        max_diff=max_diff,
        counts={report.method.value: report.count for report in reports},
    )


def operator_multiplicity(kernel_dimension: int, dim: int) -> int:
    """Multiplicity of an eigenvalue as an eigenvalue of the operator
    acting on ``ℬ(H)``-valued sequences: every vector eigenfunction
    promotes to ``d`` independent operator eigenfunctions."""
    if kernel_dimension < 0 or dim < 1:
        raise SpectrumError(f'Invalid kernel dimension {kernel_dimension} or dim {dim}')
    return kernel_dimension * dim


def promote_vector_solution(u: OperatorSolution, v: Sequence[complex]) -> OperatorSolution:
    """Promote a solution ``{u_n}`` of the vector recursion to the
    operator solution ``U_n = u_n v*/⟨v, v⟩``, so that ``U_n v = u_n`` and
    ``U_n w = 0`` for ``w ⊥ v``.

    :param u: blocks of shape ``(N, d)`` or ``(N, d, 1)``
    :raise SpectrumError: if `v` is zero
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0:
        raise SpectrumError('Cannot promote along the zero vector')
    vectors = np.asarray(u.blocks).reshape(len(u), -1)
    if vectors.shape[1] != len(v):
        raise SpectrumError(f'Vector dimension {vectors.shape[1]} does not match {len(v)}')
    blocks = vectors[:, :, None] * v.conj()[None, None, :] / norm2
    return OperatorSolution(u.z, u.lo, blocks)
