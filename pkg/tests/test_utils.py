import json

import numpy as np
import pytest
from hypothesis import given
from pytest import param

from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import (
    decode_block, decode_complex, encode_block, encode_complex, hermitian_defect, json_dumps, json_loads, opnorm,
    smin, trace_norm,
)
from tests.strategies import complex_number


@given(complex_number)
def test_complex_codec(value):
    assert decode_complex(encode_complex(value)) == value


@pytest.mark.parametrize('value, expected', [
    param([1, 2], 1 + 2j, id='pair'),
    param(3.5, 3.5 + 0j, id='real'),
    param((0.0, -1.0), -1j, id='tuple'),
])
def test_decode_complex(value, expected):
    assert decode_complex(value) == expected


@pytest.mark.parametrize('value', [
    param('1+2j', id='string'),
    param([1, 2, 3], id='triple'),
    param(True, id='boolean'),
    param([1, None], id='null'),
])
def test_decode_complex_invalid(value):
    with pytest.raises(ValueError):
        decode_complex(value)


def test_block_codec():
    block = np.array([[1, 2 - 1j], [2 + 1j, -3]])
    encoded = encode_block(block)
    assert encoded == [[1.0, 0.0], [2.0, -1.0], [2.0, 1.0], [-3.0, 0.0]]
    assert np.array_equal(decode_block(encoded, 2), block)
    with pytest.raises(ValueError):
        decode_block(encoded, 3)
    with pytest.raises(ValueError):
        decode_block('[[1, 0]]', 1)


def test_json_dumps_numpy():
    obj = {
        'z': 0.5 - 0.25j,
        'array': np.array([1.0, 2.0]),
        'int': np.int64(3),
        'float': np.float64(0.5),
        'flag': np.bool_(True),
    }
    assert json.loads(json_dumps(obj)) == {
        'z': [0.5, -0.25],
        'array': [1.0, 2.0],
        'int': 3,
        'float': 0.5,
        'flag': True,
    }


def test_json_rejects_nonfinite():
    with pytest.raises(ValueError):
        json_loads('{"x": NaN}')
    with pytest.raises(ValueError):
        json_dumps({'x': float('inf')})


def test_norms():
    x = np.diag([3.0, -1.0, 0.5])
    assert opnorm(x) == pytest.approx(3)
    assert trace_norm(x) == pytest.approx(4.5)
    assert smin(x) == pytest.approx(0.5)
    stack = np.stack([x, 2 * x])
    assert opnorm(stack) == pytest.approx([3, 6])
    assert smin(stack) == pytest.approx([0.5, 1])


def test_hermitian_defect():
    assert hermitian_defect(np.array([[1, 1j], [-1j, 2]])) == 0
    assert hermitian_defect(np.array([[0, 1], [0, 0]])) > 0.5


def test_tolerances_replace():
    tol = DEFAULT_TOLERANCES.replace(inv_tol=1e-6, refine_rel=None)
    assert tol.inv_tol == 1e-6
    assert tol.refine_rel == DEFAULT_TOLERANCES.refine_rel
    assert DEFAULT_TOLERANCES.inv_tol == 1e-10
    with pytest.raises(Exception):
        tol.inv_tol = 1
    assert Tolerances() == DEFAULT_TOLERANCES
