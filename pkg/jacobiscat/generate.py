"""Seeded random instances for test suites and the ``gen`` command."""
from __future__ import annotations

import logging
from typing import Iterator, Sequence

import numpy as np

from jacobiscat.coefficients import CoefficientData
from jacobiscat.tolerances import Tolerances
from jacobiscat.utils import opnorm, smin

__all__ = [
    'random_hermitian',
    'random_instance',
    'random_suite',
    'scalar_instance',
]

LOGGER = logging.getLogger(__name__)


def random_hermitian(rng: np.random.Generator, dim: int, bound: float, real: bool = False) -> np.ndarray:
    """A hermitian ``dim×dim`` block with spectral norm uniformly
    distributed in ``[0, bound]``."""
    g = rng.standard_normal((dim, dim))
    if not real:
        g = g + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    norm = opnorm(h)
    if norm == 0:
        return np.zeros((dim, dim), dtype=complex)
    return h * (bound * rng.uniform() / norm)


def random_instance(
        dim: int = 1,
        width: int = 3,
        bound: float = 1.0,
        seed: int = 0,
        *,
        real: bool = False,
        tol: Tolerances = None,
) -> CoefficientData:
    """A random instance supported on ``[0, width − 1]``.

    ``B_n`` is hermitian with ``‖B_n‖ ≤ bound``; ``A_n = I + H_n`` with
    ``H_n`` hermitian, ``‖H_n‖ ≤ bound``, and ``A_n`` is shifted by ``I``
    until its smallest singular value is at least 0.1.
    """
    if dim < 1 or width < 1 or bound < 0:
        raise ValueError(f'Invalid generator arguments dim={dim}, width={width}, bound={bound}')
    rng = np.random.default_rng(seed)
    identity = np.eye(dim)

    B = {n: random_hermitian(rng, dim, bound, real) for n in range(width)}
    A = {}
    for n in range(-1, width):
        a = identity + random_hermitian(rng, dim, bound, real)
        shifts = 0
        while smin(a) < 0.1:
            a = a + identity
            shifts += 1
        if shifts:
            LOGGER.debug('Shifted A_%d by %dI to keep it invertible', n, shifts)
        A[n] = a

    return CoefficientData(dim, A, B, support=(0, width - 1), tol=tol)


def random_suite(
        count: int,
        dims: Sequence[int] = (1, 2, 3),
        max_width: int = 5,
        bound: float = 1.0,
        seed: int = 0,
) -> Iterator[CoefficientData]:
    """`count` instances with seeds ``seed, seed + 1, …``, cycling through
    `dims` and drawing the support width from ``[1, max_width]``."""
    for i in range(count):
        width = int(np.random.default_rng(seed + i).integers(1, max_width + 1))
        yield random_instance(dims[i % len(dims)], width, bound, seed + i)


def scalar_instance(b: Sequence[float], a: Sequence[float] = None, start: int = 0) -> CoefficientData:
    """A ``d = 1`` instance with ``B_{start+i} = b[i]`` and, when given,
    ``A_{start−1+i} = a[i]``."""
    B = {start + i: [[x]] for i, x in enumerate(b)}
    A = {start - 1 + i: [[x]] for i, x in enumerate(a or ())}
    return CoefficientData(1, A, B)
