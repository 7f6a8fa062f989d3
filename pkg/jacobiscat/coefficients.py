from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from os import PathLike
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from jacobiscat.exc import CoefficientError
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import (
    decode_block, encode_block, hermitian_defect, json_dumpf, json_dumps, json_loadf, json_loadr, json_loads,
    opnorm, trace_norm,
)

__all__ = [
    'CoefficientData',
    'SpectralPoint',
    'load_coefficients',
    'zhukovsky',
    'zhukovsky_inverse',
    'moment_sum',
    'exponential_moment_sum',
    'exponential_radius',
    'trace_norm_budget',
    'truncated_matrix',
    'apply_operator',
]

LOGGER = logging.getLogger(__name__)

BlockLike = Union[np.ndarray, Sequence[Sequence[complex]]]


@dataclass(frozen=True)
class SpectralPoint:
    """A spectral parameter ``lam = z + 1/z`` together with its point ``z``
    in the closed unit disk (or, in exponential mode, a slightly larger
    punctured disk)."""

    z: complex
    lam: complex

    @property
    def on_unit_circle(self) -> bool:
        return abs(abs(self.z) - 1) <= DEFAULT_TOLERANCES.unit_circle_tol

    @property
    def in_disk(self) -> bool:
        return abs(self.z) < 1 - DEFAULT_TOLERANCES.unit_circle_tol


def zhukovsky(z: complex) -> SpectralPoint:
    """Map ``z`` to ``z + 1/z``.

    :raise ValueError: if `z` is zero
    """
    z = complex(z)
    if z == 0:
        raise ValueError('The Zhukovsky map is undefined at z = 0')
    return SpectralPoint(z, z + 1 / z)


def zhukovsky_inverse(lam: complex) -> SpectralPoint:
    """Return the root of ``z² − lam·z + 1 = 0`` in the closed unit disk.

    On the spectrum ``[−2, 2]`` of the free operator both roots lie on the
    unit circle and the one with non-negative imaginary part is returned.
    """
    lam = complex(lam)
    if lam.imag == 0 and abs(lam.real) <= 2:
        x = lam.real / 2
        return SpectralPoint(complex(x, math.sqrt(max(0.0, 1 - x * x))), lam)

    s = np.sqrt(lam * lam - 4)
    big = (lam + s) / 2 if abs(lam + s) >= abs(lam - s) else (lam - s) / 2
    return SpectralPoint(complex(1 / big), lam)


class CoefficientData:
    """The coefficients ``{A_n}``, ``{B_n}`` of the block Jacobi operator

    ``(τu)_n = A_{n−1}u_{n−1} + B_n u_n + A_n u_{n+1}``

    with ``d×d`` hermitian blocks. ``B_n`` may differ from zero only on the
    support ``[n_min, n_max]`` and ``A_n`` may differ from the identity
    only on ``[n_min − 1, n_max]``. Instances are immutable.
    """

    @classmethod
    def loadf(cls, path: Union[str, PathLike], **kwargs: Any) -> CoefficientData:
        """Load an instance from a JSON file.

        :param path: the path to the file
        :param kwargs: keyword arguments to pass to :meth:`from_json`
        """
        try:
            data = json_loadf(path)
        except ValueError as e:
            raise CoefficientError(f'Failed to parse {path}: {e}') from e
        return cls.from_json(data, **kwargs)

    @classmethod
    def loadr(cls, url: str, **kwargs: Any) -> CoefficientData:
        """Load an instance from a remote JSON resource.

        :param url: the URL of the resource
        :param kwargs: keyword arguments to pass to :meth:`from_json`
        """
        try:
            data = json_loadr(url)
        except ValueError as e:
            raise CoefficientError(f'Failed to parse {url}: {e}') from e
        return cls.from_json(data, **kwargs)

    @classmethod
    def loads(cls, value: str, **kwargs: Any) -> CoefficientData:
        """Load an instance from a JSON string.

        :param value: the JSON string
        :param kwargs: keyword arguments to pass to :meth:`from_json`
        """
        try:
            data = json_loads(value)
        except ValueError as e:
            raise CoefficientError(f'Failed to parse instance: {e}') from e
        return cls.from_json(data, **kwargs)

    @classmethod
    def from_json(cls, data: Any, *, tol: Tolerances = None) -> CoefficientData:
        """Build an instance from its JSON-compatible representation::

            {"dim": 1, "support": [0, 0],
             "A": [], "B": [{"n": 0, "block": [[1.5, 0]]}]}

        `support` may be ``null`` or ``[]`` for the free operator, or
        omitted to have it inferred from the stored indices.
        """
        if not isinstance(data, Mapping):
            raise CoefficientError('An instance must be a JSON object')

        dim = data.get('dim')
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise CoefficientError(f'"dim" must be a positive integer, got {dim!r}')

        if 'support' not in data:
            support = None
            infer = True
        else:
            support = data['support']
            infer = False
            if support is not None and support != []:
                if (
                        not isinstance(support, Sequence) or len(support) != 2 or
                        not all(isinstance(x, int) and not isinstance(x, bool) for x in support)
                ):
                    raise CoefficientError(f'"support" must be [n_min, n_max], got {support!r}')
                support = tuple(support)
            else:
                support = None

        blocks = {}
        for key in ('A', 'B'):
            items = data.get(key, [])
            if not isinstance(items, Sequence) or isinstance(items, str):
                raise CoefficientError(f'"{key}" must be an array of {{n, block}} objects')
            blocks[key] = {}
            for item in items:
                if not isinstance(item, Mapping) or 'n' not in item or 'block' not in item:
                    raise CoefficientError(f'Each "{key}" entry must be an object with keys "n" and "block"')
                n = item['n']
                if not isinstance(n, int) or isinstance(n, bool):
                    raise CoefficientError(f'Index {n!r} in "{key}" is not an integer')
                if n in blocks[key]:
                    raise CoefficientError(f'Duplicate index {n} in "{key}"')
                try:
                    blocks[key][n] = decode_block(item['block'], dim)
                except ValueError as e:
                    raise CoefficientError(f'{key}_{n}: {e}') from e

        return cls(dim, blocks['A'], blocks['B'], support=support, infer_support=infer, tol=tol)

    @classmethod
    def free(cls, dim: int) -> CoefficientData:
        """The free discrete Laplacian, ``A ≡ I`` and ``B ≡ 0``."""
        return cls(dim, support=None, infer_support=False)

    def __init__(
            self,
            dim: int,
            A: Mapping[int, BlockLike] = None,
            B: Mapping[int, BlockLike] = None,
            *,
            support: Optional[Tuple[int, int]] = None,
            infer_support: bool = True,
            tol: Tolerances = None,
    ) -> None:
        """Initialize and validate an instance.

        :param dim: the block dimension ``d``
        :param A: map ``n → A_n``; omitted indices default to the identity
        :param B: map ``n → B_n``; omitted indices default to zero
        :param support: ``(n_min, n_max)``, or ``None`` for empty support
            (or, with `infer_support`, to have it inferred)
        :param infer_support: infer the support from the stored indices
            when `support` is ``None``
        :param tol: numerical thresholds for hermiticity and invertibility
        :raise CoefficientError: if any block is misshapen, non-hermitian,
            out of range, or (for ``A_n``) singular
        """
        self.tol: Tolerances = tol or DEFAULT_TOLERANCES
        self.dim: int = dim
        """The block dimension ``d``."""

        A = {int(n): np.array(a, dtype=complex) for n, a in (A or {}).items()}
        B = {int(n): np.array(b, dtype=complex) for n, b in (B or {}).items()}

        if support is None and infer_support and (A or B):
            lo = min([n + 1 for n in A] + list(B))
            hi = max(list(A) + list(B))
            support = (min(lo, hi), hi)

        if support is not None:
            n_min, n_max = support
            if n_min > n_max:
                raise CoefficientError(f'Empty support interval [{n_min}, {n_max}]')
        self.support: Optional[Tuple[int, int]] = support
        """``(n_min, n_max)``, or ``None`` for the free operator."""

        self._a: Dict[int, np.ndarray] = {}
        self._a_inv: Dict[int, np.ndarray] = {}
        self._b: Dict[int, np.ndarray] = {}

        for key, stored, window in (('A', A, self.a_window), ('B', B, self.b_window)):
            for n, block in sorted(stored.items()):
                if block.shape != (dim, dim):
                    raise CoefficientError(f'{key}_{n} has shape {block.shape}, expected {(dim, dim)}')
                if n not in window:
                    raise CoefficientError(f'{key}_{n} lies outside the admissible range {_fmt_range(window)}')
                if not np.all(np.isfinite(block)):
                    raise CoefficientError(f'{key}_{n} has non-finite entries')
                if hermitian_defect(block) > self.tol.hermitian_tol:
                    raise CoefficientError(f'{key}_{n} is not hermitian')
                block.setflags(write=False)
                if key == 'A':
                    s = np.linalg.svd(block, compute_uv=False)
                    if s[-1] <= self.tol.inv_tol * s[0]:
                        raise CoefficientError(f'singular A_n at n = {n} (smallest singular value {s[-1]:.3g})')
                    inv = np.linalg.inv(block)
                    inv.setflags(write=False)
                    self._a[n] = block
                    self._a_inv[n] = inv
                else:
                    self._b[n] = block

        self._identity = np.eye(dim, dtype=complex)
        self._identity.setflags(write=False)
        self._zero = np.zeros((dim, dim), dtype=complex)
        self._zero.setflags(write=False)

        LOGGER.debug('Created instance dim=%d support=%s (%d A blocks, %d B blocks)',
                     dim, support, len(self._a), len(self._b))

    @property
    def n_min(self) -> int:
        """Lower end of the support; ``0`` for the free operator."""
        return self.support[0] if self.support else 0

    @property
    def n_max(self) -> int:
        """Upper end of the support; ``−1`` for the free operator."""
        return self.support[1] if self.support else -1

    @property
    def a_window(self) -> range:
        """Indices at which ``A_n`` may differ from the identity."""
        return range(self.n_min - 1, self.n_max + 1) if self.support else range(0)

    @property
    def b_window(self) -> range:
        """Indices at which ``B_n`` may differ from zero."""
        return range(self.n_min, self.n_max + 1) if self.support else range(0)

    @property
    def is_free(self) -> bool:
        return all(
            np.array_equal(a, self._identity) for a in self._a.values()
        ) and not any(np.any(b) for b in self._b.values())

    def a(self, n: int) -> np.ndarray:
        """``A_n``; exactly the identity outside the stored range."""
        return self._a.get(n, self._identity)

    def a_inv(self, n: int) -> np.ndarray:
        """``A_n⁻¹``."""
        return self._a_inv.get(n, self._identity)

    def b(self, n: int) -> np.ndarray:
        """``B_n``; exactly zero outside the stored range."""
        return self._b.get(n, self._zero)

    def deviation(self, n: int) -> float:
        """``‖I − A_n‖ + ‖B_n‖``."""
        return opnorm(self._identity - self.a(n)) + opnorm(self.b(n))

    def deviations(self) -> Iterator[Tuple[int, float]]:
        """Yield ``(n, ‖I − A_n‖ + ‖B_n‖)`` over every index where the
        deviation can be nonzero."""
        for n in self.a_window:
            yield n, self.deviation(n)

    def reflected(self) -> CoefficientData:
        """The instance obtained by the index reflection ``n ↦ −n``:
        ``A'_n = A_{−n−1}``, ``B'_n = B_{−n}``.

        The minus-side Jost solution of an instance is the plus-side Jost
        solution of its reflection, read at ``−n``.
        """
        if not self.support:
            return self
        return CoefficientData(
            self.dim,
            {-n - 1: a for n, a in self._a.items()},
            {-n: b for n, b in self._b.items()},
            support=(-self.n_max, -self.n_min),
            tol=self.tol,
        )

    @classmethod
    def orthogonal_sum(cls, *instances: CoefficientData) -> CoefficientData:
        """Block-diagonal composition of instances, acting on the orthogonal
        sum of their spaces."""
        if not instances:
            raise ValueError('At least one instance is required')
        supported = [c for c in instances if c.support]
        if not supported:
            return cls.free(sum(c.dim for c in instances))
        support = (min(c.n_min for c in supported), max(c.n_max for c in supported))
        A = {
            n: scipy.linalg.block_diag(*(c.a(n) for c in instances))
            for n in range(support[0] - 1, support[1] + 1)
        }
        B = {
            n: scipy.linalg.block_diag(*(c.b(n) for c in instances))
            for n in range(support[0], support[1] + 1)
        }
        return cls(sum(c.dim for c in instances), A, B, support=support, tol=instances[0].tol)

    def to_json(self) -> Dict[str, Any]:
        return {
            'dim': self.dim,
            'support': list(self.support) if self.support else None,
            'A': [{'n': n, 'block': encode_block(a)} for n, a in sorted(self._a.items())],
            'B': [{'n': n, 'block': encode_block(b)} for n, b in sorted(self._b.items())],
        }

    def dumpf(self, path: Union[str, PathLike]) -> None:
        """Serialize the instance to a JSON file."""
        json_dumpf(self.to_json(), path)

    def dumps(self) -> str:
        """Serialize the instance to a JSON string."""
        return json_dumps(self.to_json())

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(dim={self.dim}, support={self.support})'


def load_coefficients(path: Union[str, PathLike], *, tol: Tolerances = None) -> CoefficientData:
    """Load and validate an instance file."""
    return CoefficientData.loadf(path, tol=tol)


def moment_sum(c: CoefficientData, k: int) -> float:
    """``Σ |n|^k (‖I − A_n‖ + ‖B_n‖)``, exact at finite support."""
    if k < 0:
        raise ValueError('The moment order must be non-negative')
    return float(sum(abs(n) ** k * w for n, w in c.deviations()))


def exponential_moment_sum(c: CoefficientData, epsilon: float) -> float:
    """``Σ exp(ε|n|) (‖I − A_n‖ + ‖B_n‖)``."""
    if epsilon <= 0:
        raise ValueError('epsilon must be positive')
    return float(sum(math.exp(epsilon * abs(n)) * w for n, w in c.deviations()))


def exponential_radius(epsilon: float) -> float:
    """Radius ``e^{ε/2}`` of the punctured disk on which the Jost
    solutions are defined under the exponential moment condition."""
    return math.exp(epsilon / 2)


def trace_norm_budget(c: CoefficientData) -> float:
    """``2 Σ ‖A_n − I‖₁ + Σ ‖B_n‖₁``."""
    identity = np.eye(c.dim)
    return float(
        2 * sum(trace_norm(c.a(n) - identity) for n in c.a_window) +
        sum(trace_norm(c.b(n)) for n in c.b_window)
    )


def truncated_matrix(c: CoefficientData, half_width: int) -> np.ndarray:
    """The Dirichlet truncation of the operator to indices ``[−M, M]``,
    a dense hermitian matrix of size ``(2M + 1)·d``.

    :raise CoefficientError: if `half_width` does not cover the support
        with one index to spare
    """
    M = half_width
    if M < 1 or (c.support and M < max(abs(c.n_min), abs(c.n_max)) + 1):
        raise CoefficientError(f'half width {M} is too small for support {c.support}')

    d = c.dim
    size = (2 * M + 1) * d
    h = np.zeros((size, size), dtype=complex)
    for i, n in enumerate(range(-M, M + 1)):
        h[i * d:(i + 1) * d, i * d:(i + 1) * d] = c.b(n)
        if n < M:
            a = c.a(n)
            h[i * d:(i + 1) * d, (i + 1) * d:(i + 2) * d] = a
            h[(i + 1) * d:(i + 2) * d, i * d:(i + 1) * d] = a.conj().T
    return h


def apply_operator(c: CoefficientData, u: np.ndarray, lo: int) -> np.ndarray:
    """Apply the operator to a finite window of vectors or blocks.

    :param u: array of shape ``(N, d)`` (vectors) or ``(N, d, k)``
        (blocks), holding ``u_lo, ..., u_{lo+N−1}``; values outside the
        window are taken as zero
    :param lo: index of the first entry
    :return: ``(τu)_n`` over the same window
    """
    u = np.asarray(u, dtype=complex)
    vector = u.ndim == 2
    if vector:
        u = u[..., None]
    count = u.shape[0]

    a = np.stack([c.a(n) for n in range(lo - 1, lo + count)])
    b = np.stack([c.b(n) for n in range(lo, lo + count)])

    out = b @ u
    out[1:] += a[1:-1] @ u[:-1]
    out[:-1] += a[1:-1] @ u[1:]
    return out[..., 0] if vector else out


def _fmt_range(r: range) -> str:
    return f'[{r.start}, {r.stop - 1}]' if len(r) else '(empty)'
