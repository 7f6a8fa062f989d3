import math

import numpy as np
import pytest
from pytest import param

from jacobiscat import CoefficientData, EigenvalueItem, EigenvalueReport, Method
from jacobiscat.exc import SpectrumError
from jacobiscat.jost import OperatorSolution, recursion_residual
from jacobiscat.spectrum import (
    bs_determinant, bs_zero_scan, compare_reports, eigenvalue_bounds, eigenvector, eigenvector_residual,
    free_resolvent_defect, operator_multiplicity, promote_vector_solution, scan_grid, truncation_eigen,
    wronskian_scan, wronskian_singular_values,
)
from tests import delta, delta_b, delta_lam, delta_z, diagonal_pair

methods = pytest.mark.parametrize('find', [
    param(wronskian_scan, id='wronskian'),
    param(truncation_eigen, id='truncation'),
    param(bs_zero_scan, id='determinant'),
])


@methods
def test_delta_eigenvalue(find):
    report = find(delta())
    assert len(report) == 1
    item = report.items[0]
    assert item.z == pytest.approx(delta_z, abs=1e-8)
    assert item.lam == pytest.approx(delta_lam, abs=1e-8)
    assert item.multiplicity == 1
    assert report.count == 1


@methods
def test_free_has_no_eigenvalues(find):
    assert len(find(CoefficientData.free(2))) == 0


@methods
def test_diagonal_pair(find):
    report = find(diagonal_pair())
    assert report.lams == pytest.approx([-delta_lam, delta_lam], abs=1e-8)
    assert report.zs == pytest.approx([-delta_z, delta_z], abs=1e-8)


@methods
def test_double_eigenvalue(find):
    report = find(CoefficientData.orthogonal_sum(delta(), delta()))
    assert len(report) == 1
    assert report.items[0].multiplicity == 2
    assert report.count == 2
    assert report.zs == pytest.approx([delta_z], abs=1e-6)


def test_three_methods_agree(random_instances):
    for c in random_instances:
        scan = wronskian_scan(c)
        det = bs_zero_scan(c)
        exact = compare_reports(scan, det)
        assert exact.agree, (c, exact.rows)

        trunc = truncation_eigen(c)
        assert all(abs(lam) > 2 for lam in trunc.lams)
        # M = 80 does not resolve eigenvalues close to the band edges
        inner = compare_reports(scan.within(0.85), trunc.within(0.85), det.within(0.85))
        assert inner.agree, (c, inner.rows)
        assert inner.max_diff <= 1e-6


def test_wronskian_singular_values():
    zs = np.array([-0.7, 0.3, 0.8])
    sv = wronskian_singular_values(delta(), zs)
    expected = np.abs(1 - delta_b * zs / (1 - zs ** 2))
    assert sv[:, 0] == pytest.approx(expected)
    assert wronskian_singular_values(CoefficientData.free(3), zs) == pytest.approx(np.ones((3, 3)))


def test_scan_diagnostics():
    report = wronskian_scan(delta(), grid_size=500)
    assert report.diagnostics['grid_size'] == 500
    assert report.diagnostics['candidates'] >= 1
    assert report.method is Method.WRONSKIAN_SCAN
    explicit = wronskian_scan(delta(), grid_size=500, refine_tol=1e-6)
    assert explicit.diagnostics['refine_tol'] == 1e-6
    assert explicit.zs == pytest.approx([delta_z], abs=1e-8)
    determinant = bs_zero_scan(delta(), grid_size=500, refine_tol=1e-6)
    assert determinant.diagnostics['refine_tol'] == 1e-6
    assert determinant.zs == pytest.approx([delta_z], abs=1e-8)


def test_scan_grid():
    left, right = scan_grid(11, 0.01)
    assert left[0] == pytest.approx(-0.99) and left[-1] == pytest.approx(-0.01)
    assert right[0] == pytest.approx(0.01) and right[-1] == pytest.approx(0.99)
    with pytest.raises(SpectrumError):
        scan_grid(2, 0.01)
    with pytest.raises(SpectrumError):
        scan_grid(100, 0.5)


@pytest.mark.parametrize('z', [
    param(0.3 + 0.4j, id='complex'),
    param(-0.6, id='negative'),
    param(0.95j, id='imaginary'),
])
def test_delta_determinant(z):
    assert bs_determinant(delta(), z) == pytest.approx(1 + delta_b * z / (z * z - 1))


def test_determinant_properties():
    c = diagonal_pair()
    zs = np.array([0.2, -0.4 + 0.1j, 0.9j])
    f = bs_determinant(c, zs)
    assert f.shape == (3,)
    expected = (1 + 1.5 * zs / (zs * zs - 1)) * (1 - 1.5 * zs / (zs * zs - 1))
    assert f == pytest.approx(expected)
    assert bs_determinant(c, 1e-9) == pytest.approx(1, abs=1e-8)
    assert bs_determinant(CoefficientData.free(2), 0.5) == 1
    assert bs_determinant(delta(), delta_z) == pytest.approx(0, abs=1e-12)
    for z in (0, 1, -1):
        with pytest.raises(SpectrumError):
            bs_determinant(c, z)


def test_determinant_cauchy_riemann(random_instances):
    h = 1e-5
    points = np.array([0.3 + 0.2j, -0.5 + 0.4j, 0.1 - 0.6j, 0.7j])
    for c in random_instances[:5]:
        for z in points:
            f = bs_determinant(c, z + np.array([h, -h, 1j * h, -1j * h]))
            fx = (f[0] - f[1]) / (2 * h)
            fy = (f[2] - f[3]) / (2 * h)
            assert abs(fx + 1j * fy) <= 1e-6 * max(1.0, abs(fx), float(np.max(np.abs(f)))), (c, z)


def test_determinant_origin_rate():
    # |f(z) − 1|/|z| = b/(1 − z²) for the delta instance
    report = bs_zero_scan(delta(), 500)
    assert report.diagnostics['origin_rate'] == pytest.approx(delta_b / (1 - 1e-6))


def test_free_resolvent():
    for z in (0.5, -0.3 + 0.6j, 0.9):
        assert free_resolvent_defect(z) <= 1e-12
    with pytest.raises(SpectrumError):
        free_resolvent_defect(1.5)


def test_eigenvector():
    u = eigenvector(delta(), delta_z)
    assert u.blocks.shape[1:] == (1, 1)
    assert np.sum(np.abs(u.blocks) ** 2) == pytest.approx(1)
    # |u_n| decays like z^|n| on both sides
    assert abs(u[3][0, 0] / u[2][0, 0]) == pytest.approx(delta_z)
    assert abs(u[-3][0, 0] / u[-2][0, 0]) == pytest.approx(delta_z)
    assert eigenvector_residual(delta(), delta_z) <= 1e-8
    assert eigenvector_residual(diagonal_pair(), -delta_z) <= 1e-8
    with pytest.raises(SpectrumError):
        eigenvector(delta(), 0.3)
    with pytest.raises(SpectrumError):
        eigenvector(delta(), 1.0)


def test_eigenvector_suite(random_instances):
    for c in random_instances[:5]:
        for item in wronskian_scan(c):
            assert eigenvector_residual(c, item.z, item.multiplicity) <= 1e-6


def test_truncation_half_width():
    with pytest.raises(SpectrumError):
        truncation_eigen(delta(), 10)
    report = truncation_eigen(delta(), 30)
    assert report.converged
    assert report.diagnostics['half_width'] == 30
    assert report.items[0].residual <= 1e-12
    unchecked = truncation_eigen(delta(), 30, check_convergence=False)
    assert unchecked.items[0].residual == 0


def test_delta_bound():
    report = wronskian_scan(delta()).within(0.9)
    bounds = eigenvalue_bounds(delta(), 0.9, report)
    assert bounds.product_lhs == pytest.approx(1.8)
    assert bounds.product_rhs == pytest.approx(math.exp(0.9 / 0.19 * 1.5))
    assert bounds.count_radius == pytest.approx(0.45)
    assert bounds.count_lhs == 0
    assert bounds.count_rhs == pytest.approx(0.9 / 0.19 * 1.5 / math.log(2))
    assert bounds.holds


def test_free_bound():
    bounds = eigenvalue_bounds(CoefficientData.free(1), 0.5, EigenvalueReport(Method.WRONSKIAN_SCAN))
    assert bounds.product_lhs == 1
    assert bounds.product_rhs == 1
    assert bounds.holds


def test_bound_arguments():
    report = wronskian_scan(delta())
    with pytest.raises(SpectrumError):
        eigenvalue_bounds(delta(), 0.4, report)
    with pytest.raises(SpectrumError):
        eigenvalue_bounds(delta(), 1.2, report)
    with pytest.raises(SpectrumError):
        eigenvalue_bounds(delta(), 0.9, report.within(0.9), count_radius=0.95)
    bounds = eigenvalue_bounds(delta(), 0.9, report.within(0.9), count_radius=0.6)
    assert bounds.count_lhs == 1


@pytest.mark.parametrize('radius', [0.5, 0.8, 0.95])
def test_suite_bounds(random_instances, radius):
    for c in random_instances:
        report = wronskian_scan(c).within(radius)
        assert eigenvalue_bounds(c, radius, report).holds, c


def test_report_dedupe():
    report = EigenvalueReport('truncation', [
        EigenvalueItem(0.5, residual=1e-3),
        EigenvalueItem(0.5 + 1e-8, residual=1e-9),
        EigenvalueItem(-0.5, multiplicity=2),
    ])
    assert report.method is Method.TRUNCATION
    assert len(report) == 2
    assert report.zs == [-0.5, 0.5 + 1e-8]
    assert report.count == 3
    assert len(report.within(0.4)) == 0
    assert report.within(0.6).count == 3


@pytest.mark.parametrize('z', [param(0, id='zero'), param(1, id='edge'), param(-1.2, id='outside')])
def test_item_rejected(z):
    with pytest.raises(SpectrumError):
        EigenvalueItem(z)


def test_item_multiplicity():
    with pytest.raises(SpectrumError):
        EigenvalueItem(0.5, multiplicity=0)
    assert EigenvalueItem(-0.5).lam == pytest.approx(-2.5)


def test_compare_reports():
    z = [EigenvalueItem(0.5)]
    a = EigenvalueReport(Method.WRONSKIAN_SCAN, z)
    b = EigenvalueReport(Method.DETERMINANT, [EigenvalueItem(0.5 + 1e-9)])
    c = EigenvalueReport(Method.TRUNCATION, [EigenvalueItem(0.5 + 1e-5), EigenvalueItem(0.7)])
    ab = compare_reports(a, b)
    assert ab.agree
    assert ab.rows[0]['lam'] == pytest.approx(2.5)
    assert ab.max_diff == pytest.approx(1e-9)
    abc = compare_reports(a, b, c)
    assert not abc.agree
    assert abc.rows[0]['diff'] is None
    assert abc.rows[1]['wronskian_scan'] is None
    assert abc.counts == {'wronskian_scan': 1, 'determinant': 1, 'truncation': 2}


def test_operator_multiplicity():
    assert operator_multiplicity(1, 3) == 3
    assert operator_multiplicity(0, 2) == 0
    with pytest.raises(SpectrumError):
        operator_multiplicity(-1, 2)


def test_promote_scalar():
    u = eigenvector(delta(), delta_z)
    promoted = promote_vector_solution(u, [2.0])
    assert promoted.blocks == pytest.approx(u.blocks / 2)


def test_promote_pair():
    c = diagonal_pair()
    u = eigenvector(delta(), delta_z)
    vectors = np.concatenate((u.blocks, np.zeros_like(u.blocks)), axis=1)
    promoted = promote_vector_solution(OperatorSolution(delta_z, u.lo, vectors), [1, 0])
    assert promoted.blocks.shape[1:] == (2, 2)
    assert recursion_residual(c, promoted) <= 1e-10
    for n in promoted.indices:
        assert promoted[n] @ [1, 0] == pytest.approx(vectors[n - u.lo, :, 0])
        assert promoted[n] @ [0, 1] == pytest.approx([0, 0])
    with pytest.raises(SpectrumError):
        promote_vector_solution(u, [0])
    with pytest.raises(SpectrumError):
        promote_vector_solution(u, [1, 0])
