import numpy as np

from jacobiscat import CoefficientData
from jacobiscat.generate import scalar_instance

delta_b = 1.5
"""Strength of the single-site potential ``B_0 = b``; its only eigenvalue
is ``λ = √(4 + b²) = 2.5`` at ``z = 0.5``."""
delta_z = 0.5
delta_lam = 2.5

delta_json = {
    "dim": 1,
    "support": [0, 0],
    "A": [],
    "B": [{"n": 0, "block": [[1.5, 0]]}],
}


def delta(b: float = delta_b) -> CoefficientData:
    return scalar_instance([b])


def diagonal_pair() -> CoefficientData:
    """``d = 2`` orthogonal sum of ``B_0 = 1.5`` and ``B_0 = −1.5``."""
    return CoefficientData.orthogonal_sum(delta(1.5), delta(-1.5))


def hopping(a: float = 2.0) -> CoefficientData:
    """``d = 1`` with the single off-diagonal coefficient ``A_0 = a``."""
    return CoefficientData(1, {0: [[a]]})


def delta_alpha(z: complex, b: float = delta_b) -> complex:
    return 1 - b / (1 / z - z)


def delta_beta(z: complex, b: float = delta_b) -> complex:
    return b / (1 / z - z)


def circle_points(count: int = 64) -> np.ndarray:
    """Unit-circle points ``e^{iθ}``, ``θ = 2π(k + ½)/count``; never ``±1``."""
    return np.exp(2j * np.pi * (np.arange(count) + 0.5) / count)


def real_points(count: int = 16) -> np.ndarray:
    """Points in ``(−0.9, −0.1) ∪ (0.1, 0.9)``."""
    half = np.linspace(0.1, 0.9, count // 2)
    return np.concatenate((-half[::-1], half))
