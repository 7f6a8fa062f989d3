import logging

import hypothesis.strategies as hs
import numpy as np
import pytest
from hypothesis import given
from pytest import param

from jacobiscat import CoefficientData, Tolerances
from jacobiscat.exc import HypothesisError, SingularWronskianError, WronskianConstancyError, WronskianError
from jacobiscat.generate import random_instance
from jacobiscat.jost import OperatorSolution, Species, build_series_data, default_window, jost_recursion
from jacobiscat.utils import opnorm
from jacobiscat.wronskian import (
    Basis, adjoint_conjugate_solution, alpha_beta, christoffel_darboux, expansion_residual, fundamental_matrix,
    fundamental_solve, green_identity, jost_identities, wronskian_at, wronskian_constant, z_operator,
)
from tests import circle_points, delta, delta_alpha, delta_beta, delta_b, delta_z
from tests.strategies import angle, circle_angle

inner_radius = hs.floats(min_value=0.4, max_value=0.95)


def test_free_identities():
    c = CoefficientData.free(2)
    for z in circle_points():
        residuals = jost_identities(c, z)
        assert max(residuals.values()) <= 1e-12, (z, residuals)


def test_free_wronskian_value():
    c = CoefficientData.free(1)
    z = np.exp(0.3j)
    left = adjoint_conjugate_solution(c, Species.PLUS, z)
    right = jost_recursion(c, Species.PLUS, 1 / z)
    w = wronskian_constant(c, left, right)
    assert w.value[0, 0] == pytest.approx(1 / z - z, abs=1e-12)
    assert w.n_checked == list(range(-4, 5))
    assert w.deviation <= 1e-12
    assert w.is_invertible()


def test_suite_identities(random_instances):
    for c in random_instances:
        s = build_series_data(c)
        for z in circle_points(16):
            assert max(jost_identities(c, z, series=s).values()) <= 1e-9, (c, z)


def test_unitarity_on_circle(random_instances):
    for c in random_instances:
        identity = np.eye(c.dim)
        for z in circle_points(16):
            cc = alpha_beta(c, z)
            for species in Species:
                a, b = cc.alpha(species), cc.beta(species)
                defect = opnorm(a.conj().T @ a - b.conj().T @ b - identity)
                assert defect <= 1e-9 * max(1.0, opnorm(a) ** 2), (c, z, species)
            assert cc.residual <= 1e-9


def test_adjoint_relations(random_instances):
    for c in random_instances:
        for z in (0.7 + 0.4j, -0.3 + 0.75j, np.exp(1.1j), np.exp(-2.5j)):
            cc = alpha_beta(c, z)
            conjugate = alpha_beta(c, np.conj(z))
            scale = max(1.0, opnorm(cc.alpha_plus), opnorm(cc.alpha_minus))
            assert opnorm(cc.alpha_plus.conj().T - conjugate.alpha_minus) <= 1e-9 * scale
            assert opnorm(cc.alpha_minus.conj().T - conjugate.alpha_plus) <= 1e-9 * scale
            if abs(abs(z) - 1) < 1e-12:
                scale = max(1.0, opnorm(cc.beta_plus))
                assert opnorm(cc.beta_plus.conj().T + cc.beta_minus) <= 1e-9 * scale


@pytest.mark.parametrize('z', [
    param(0.3 + 0.4j, id='disk'),
    param(np.exp(0.9j), id='circle'),
    param(-0.7, id='negative-real'),
])
def test_delta_connection_coefficients(z):
    cc = alpha_beta(delta(), z)
    for species in Species:
        assert cc.alpha(species)[0, 0] == pytest.approx(delta_alpha(z), rel=1e-10)
        assert cc.beta(species)[0, 0] == pytest.approx(delta_beta(z), rel=1e-10)
    assert set(cc.wronskians) == {'alpha_plus', 'beta_plus', 'alpha_minus', 'beta_minus'}


@given(inner_radius, angle)
def test_hypothesis_delta_alpha(r, theta):
    z = r * np.exp(1j * theta)
    cc = alpha_beta(delta(), z)
    assert cc.alpha_plus[0, 0] == pytest.approx(delta_alpha(z), rel=1e-9, abs=1e-12)


def test_series_and_recursion_agree():
    c = random_instance(2, 4, seed=12)
    s = build_series_data(c)
    z = 0.6 * np.exp(0.5j)
    by_recursion = alpha_beta(c, z)
    by_series = alpha_beta(c, z, series=s)
    scale = max(1.0, opnorm(by_recursion.alpha_plus))
    assert opnorm(by_recursion.alpha_plus - by_series.alpha_plus) <= 1e-9 * scale
    assert opnorm(by_recursion.beta_minus - by_series.beta_minus) <= 1e-9 * scale


def test_expansion_residual_warning(caplog):
    c = random_instance(2, 4, seed=12)
    z = 0.6 * np.exp(0.5j)
    with caplog.at_level(logging.WARNING, logger='jacobiscat.wronskian'):
        coefficients = alpha_beta(c, z)
    assert 0 < coefficients.residual <= 1e-8
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]

    with caplog.at_level(logging.WARNING, logger='jacobiscat.wronskian'):
        alpha_beta(c, z, tol=Tolerances(algebra_tol=coefficients.residual / 2))
    assert [r.name for r in caplog.records if r.levelno >= logging.WARNING] == ['jacobiscat.wronskian']
    assert 'do not reproduce' in caplog.text


@pytest.mark.parametrize('z', [param(0, id='zero'), param(1, id='plus-one'), param(-1, id='minus-one')])
def test_excluded_points(z):
    with pytest.raises(WronskianError):
        alpha_beta(delta(), z)
    with pytest.raises(WronskianError):
        jost_identities(delta(), z)


def test_constancy_failure():
    c = CoefficientData.free(1)
    left = adjoint_conjugate_solution(c, Species.PLUS, 0.5)
    right = jost_recursion(c, Species.MINUS, 0.3)
    with pytest.raises(WronskianConstancyError) as e:
        wronskian_constant(c, left, right)
    assert isinstance(e.value, HypothesisError)


def test_too_few_indices():
    c = delta()
    left = adjoint_conjugate_solution(c, Species.PLUS, 0.5, (-1, 2))
    right = jost_recursion(c, Species.MINUS, 0.5, (-1, 2))
    with pytest.raises(WronskianError):
        wronskian_constant(c, left, right)
    with pytest.raises(WronskianError):
        wronskian_at(c, left, right, -1)
    with pytest.raises(WronskianError):
        wronskian_constant(c, left, jost_recursion(c, Species.MINUS, 0.5, (5, 9)))


@pytest.mark.parametrize('basis', [Basis.PLUS_PAIR, Basis.MINUS_PAIR, Basis.PLUS_MINUS])
def test_z_operator(basis):
    c = random_instance(2, 3, seed=3)
    z = np.exp(0.8j)
    for j in (-2, 1, 4):
        z_j = z_operator(c, z, j, basis)
        y_j = fundamental_matrix(c, z, j, basis)
        assert opnorm(z_j @ y_j - np.eye(4)) <= 1e-9 * max(1.0, opnorm(z_j) * opnorm(y_j))


def test_z_operator_suite(random_instances):
    for c in random_instances:
        window = default_window(c)
        for z in circle_points(8):
            for j in (window[0], c.n_min, window[1] - 1):
                z_operator(c, z, j, Basis.PLUS_PAIR)


def test_z_operator_singular():
    # α⁻(0.5) = 0 for the single-site potential: U⁺ and U⁻ are proportional
    with pytest.raises(SingularWronskianError):
        z_operator(delta(), delta_z, 0, Basis.PLUS_MINUS)
    with pytest.raises(WronskianError):
        z_operator(delta(), delta_z, 5, Basis.PLUS_PAIR)


def test_fundamental_solve_connection():
    c = random_instance(3, 2, seed=5)
    z = 0.5 + 0.2j
    cc = alpha_beta(c, z)
    v = jost_recursion(c, Species.MINUS, z)
    p, q = fundamental_solve(c, z, v, Basis.PLUS_PAIR)
    scale = max(1.0, opnorm(cc.alpha_plus))
    assert opnorm(p - cc.beta_plus) <= 1e-9 * scale
    assert opnorm(q - cc.alpha_plus) <= 1e-9 * scale
    assert expansion_residual(c, z, v, Basis.PLUS_PAIR, p, q) <= 1e-9


@pytest.mark.parametrize('basis', [Basis.MINUS_PAIR, Basis.PLUS_MINUS])
def test_fundamental_solve_mixed(basis):
    c = random_instance(2, 3, seed=7)
    z = np.exp(2.2j)
    rng = np.random.default_rng(7)
    window = default_window(c)
    # an arbitrary solution: U⁺(z)X + U⁺(z⁻¹)Y
    x, y = rng.standard_normal((2, 2, 2))
    v = jost_recursion(c, Species.PLUS, z, window).blocks @ x + jost_recursion(c, Species.PLUS, 1 / z, window).blocks @ y
    v = OperatorSolution(z, window[0], v)
    p, q = fundamental_solve(c, z, v, basis)
    assert expansion_residual(c, z, v, basis, p, q) <= 1e-8


def test_green_identity():
    c = random_instance(2, 3, seed=2)
    rng = np.random.default_rng(2)
    shape = (9, 2, 2)
    u = OperatorSolution(0, -3, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    v = OperatorSolution(0, -3, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    lhs, rhs = green_identity(c, u, v, -2, 4)
    assert opnorm(lhs - rhs) <= 1e-12 * max(1.0, opnorm(lhs))
    with pytest.raises(WronskianError):
        green_identity(c, u, v, -3, 4)
    with pytest.raises(WronskianError):
        green_identity(c, u, v.restrict(-2, 5), -1, 3)


@given(circle_angle, inner_radius)
def test_christoffel_darboux(theta, r):
    c = random_instance(2, 3, seed=8)
    lhs, rhs = christoffel_darboux(c, np.exp(1j * theta), r * np.exp(1j * theta / 2), 1)
    assert opnorm(lhs - rhs) <= 1e-9 * max(1.0, opnorm(lhs), opnorm(rhs))


def test_delta_beta_magnitude():
    # on the circle |α|² − |β|² = 1 for the single-site potential
    for z in circle_points(32):
        cc = alpha_beta(delta(), z)
        assert abs(cc.alpha_plus[0, 0]) ** 2 - abs(cc.beta_plus[0, 0]) ** 2 == pytest.approx(1)
        assert cc.beta_plus[0, 0] == pytest.approx(delta_b / (1 / z - z))
