import pathlib

import numpy as np
import pytest
from hypothesis import given
from pytest import param
from pytest_httpserver import HTTPServer

from jacobiscat import CoefficientData, create_instance, load_coefficients
from jacobiscat.coefficients import (
    apply_operator, exponential_moment_sum, exponential_radius, moment_sum, trace_norm_budget, truncated_matrix,
    zhukovsky, zhukovsky_inverse,
)
from jacobiscat.exc import CoefficientError
from jacobiscat.generate import random_instance
from tests import delta, delta_json, diagonal_pair, hopping
from tests.strategies import angle, disk_radius

datadir = pathlib.Path(__file__).parent / 'data'


def test_load_delta():
    c = load_coefficients(datadir / 'delta.json')
    assert c.dim == 1
    assert c.support == (0, 0)
    assert c.b(0) == pytest.approx(np.array([[1.5]]))
    assert np.array_equal(c.a(0), np.eye(1))
    assert np.array_equal(c.b(7), np.zeros((1, 1)))


def test_load_free():
    c = load_coefficients(datadir / 'free.json')
    assert c.dim == 2
    assert c.support is None
    assert (c.n_min, c.n_max) == (0, -1)
    assert c.is_free
    assert list(c.a_window) == [] and list(c.b_window) == []


def test_infer_support():
    c = load_coefficients(datadir / 'inferred.json')
    assert c.support == (0, 2)
    assert list(c.a_window) == [-1, 0, 1, 2]
    assert c.a(-1)[0, 0] == 1.2


@pytest.mark.parametrize('filename, message', [
    param('singular.json', 'singular A_n at n = 0', id='singular'),
    param('nonhermitian.json', 'not hermitian', id='nonhermitian'),
    param('malformed.json', 'Failed to parse', id='malformed'),
])
def test_invalid_instance(filename, message):
    with pytest.raises(CoefficientError, match=message):
        load_coefficients(datadir / filename)


@pytest.mark.parametrize('data', [
    param({"dim": 0}, id='dim'),
    param({"dim": 1, "support": [0]}, id='support-length'),
    param({"dim": 1, "support": [2, 1]}, id='support-empty'),
    param({"dim": 1, "B": [{"n": 0}]}, id='missing-block'),
    param({"dim": 1, "B": [{"n": 0, "block": [[1, 0]]}, {"n": 0, "block": [[1, 0]]}]}, id='duplicate'),
    param({"dim": 2, "B": [{"n": 0, "block": [[1, 0]]}]}, id='block-size'),
    param({"dim": 1, "support": [0, 0], "B": [{"n": 3, "block": [[1, 0]]}]}, id='outside-support'),
    param({"dim": 1, "support": [0, 0], "A": [{"n": 1, "block": [[2, 0]]}]}, id='a-outside-window'),
    param([1, 2], id='not-object'),
])
def test_invalid_json(data):
    with pytest.raises(CoefficientError):
        CoefficientData.from_json(data)


def test_json_round_trip():
    c = random_instance(2, 3, seed=7)
    d = CoefficientData.loads(c.dumps())
    assert d.support == c.support
    for n in c.a_window:
        assert np.array_equal(d.a(n), c.a(n))
    for n in c.b_window:
        assert np.array_equal(d.b(n), c.b(n))


def test_dumpf(tmp_path):
    path = tmp_path / 'instance.json'
    delta().dumpf(path)
    assert load_coefficients(path).b(0)[0, 0] == 1.5


def test_loadr():
    with HTTPServer() as httpserver:
        httpserver.expect_request('/delta.json').respond_with_json(delta_json)
        c = CoefficientData.loadr(httpserver.url_for('/delta.json'))
        d = create_instance(httpserver.url_for('/delta.json'))
    assert c.b(0)[0, 0] == 1.5
    assert d.support == (0, 0)


def test_create_instance():
    assert create_instance(dim=3).dim == 3
    assert create_instance(delta_json).support == (0, 0)
    assert create_instance(datadir / 'diagonal.json').dim == 2


def test_arrays_are_read_only():
    c = delta()
    with pytest.raises(ValueError):
        c.b(0)[0, 0] = 2


def test_moment_sums():
    c = CoefficientData(1, {-2: [[1.5]]}, {1: [[-2.0]]})
    # deviations: |A_{-2} - 1| = 0.5 at n = -2, |B_1| = 2 at n = 1
    assert moment_sum(c, 0) == pytest.approx(2.5)
    assert moment_sum(c, 1) == pytest.approx(0.5 * 2 + 2 * 1)
    assert moment_sum(c, 3) == pytest.approx(0.5 * 8 + 2 * 1)
    assert exponential_moment_sum(c, 1.0) == pytest.approx(0.5 * np.exp(2) + 2 * np.exp(1))
    assert exponential_radius(2.0) == pytest.approx(np.e)
    with pytest.raises(ValueError):
        moment_sum(c, -1)


def test_trace_norm_budget():
    assert trace_norm_budget(CoefficientData.free(2)) == 0
    assert trace_norm_budget(delta()) == pytest.approx(1.5)
    assert trace_norm_budget(hopping(2.0)) == pytest.approx(2.0)
    assert trace_norm_budget(diagonal_pair()) == pytest.approx(3.0)


def test_reflected():
    c = random_instance(2, 4, seed=3)
    r = c.reflected()
    assert r.support == (-c.n_max, -c.n_min)
    for n in c.a_window:
        assert np.array_equal(r.a(-n - 1), c.a(n))
    for n in c.b_window:
        assert np.array_equal(r.b(-n), c.b(n))
    rr = r.reflected()
    assert rr.support == c.support


def test_orthogonal_sum_spectrum():
    a, b = delta(1.5), random_instance(1, 3, seed=11)
    c = CoefficientData.orthogonal_sum(a, b)
    assert c.dim == 2
    union = np.sort(np.concatenate((
        np.linalg.eigvalsh(truncated_matrix(a, 30)),
        np.linalg.eigvalsh(truncated_matrix(b, 30)),
    )))
    assert np.linalg.eigvalsh(truncated_matrix(c, 30)) == pytest.approx(union, abs=1e-12)


def test_free_truncation_norm():
    h = truncated_matrix(CoefficientData.free(1), 200)
    assert np.linalg.norm(h, 2) == pytest.approx(2, abs=1e-3)


def test_truncated_matrix_hermitian():
    h = truncated_matrix(random_instance(3, 5, seed=5), 12)
    assert h.shape == (75, 75)
    assert np.allclose(h, h.conj().T)


def test_truncation_too_small():
    with pytest.raises(CoefficientError):
        truncated_matrix(random_instance(1, 5, seed=0), 3)


def test_apply_operator_matches_matrix():
    c = random_instance(2, 3, seed=2)
    m = 10
    rng = np.random.default_rng(0)
    u = rng.standard_normal((2 * m + 1, 2)) + 1j * rng.standard_normal((2 * m + 1, 2))
    expected = truncated_matrix(c, m) @ u.reshape(-1)
    assert apply_operator(c, u, -m).reshape(-1) == pytest.approx(expected, abs=1e-12)

    blocks = rng.standard_normal((2 * m + 1, 2, 3))
    columns = [apply_operator(c, blocks[..., k], -m) for k in range(3)]
    assert apply_operator(c, blocks, -m) == pytest.approx(np.stack(columns, axis=-1), abs=1e-12)


@given(disk_radius, angle)
def test_zhukovsky_inverse(r, theta):
    z = r * np.exp(1j * theta)
    point = zhukovsky(z)
    assert point.in_disk
    assert zhukovsky_inverse(point.lam).z == pytest.approx(z, abs=1e-9)


@pytest.mark.parametrize('lam, z', [
    param(2.5, 0.5, id='above'),
    param(-2.5, -0.5, id='below'),
    param(0.0, 1j, id='band-centre'),
    param(2.0, 1.0, id='band-edge'),
])
def test_zhukovsky_inverse_values(lam, z):
    assert zhukovsky_inverse(lam).z == pytest.approx(z)


def test_zhukovsky_zero():
    with pytest.raises(ValueError):
        zhukovsky(0)
    assert zhukovsky(np.exp(0.3j)).on_unit_circle
