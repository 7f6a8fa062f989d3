import json
from os import PathLike
from typing import Any, List, Sequence, Union

import numpy as np

__all__ = [
    'json_dumpf',
    'json_dumps',
    'json_loadf',
    'json_loadr',
    'json_loads',
    'encode_complex',
    'decode_complex',
    'encode_block',
    'decode_block',
    'opnorm',
    'trace_norm',
    'smin',
    'hermitian_defect',
]

requests = None


def _import_requests():
    global requests
    try:
        import requests
    except ImportError as e:
        raise ImportError('requests is not installed, run `pip install jacobiscat[requests]`') from e


def json_dumpf(obj: Any, path: Union[str, PathLike]) -> None:
    """Serialize a JSON-compatible Python object to a JSON file.

    Complex numbers and numpy scalars/arrays are accepted; complex values
    are written as ``[re, im]`` pairs."""
    with open(path, 'w') as f:
        json.dump(obj, f, ensure_ascii=False, allow_nan=False, default=_serialize_custom_obj)


def json_dumps(obj: Any, **kwargs: Any) -> str:
    """Serialize a JSON-compatible Python object to a JSON string."""
    return json.dumps(obj, ensure_ascii=False, allow_nan=False, default=_serialize_custom_obj, **kwargs)


def json_loadf(path: Union[str, PathLike]) -> Any:
    """Deserialize a JSON file, returning a JSON-compatible Python object."""
    with open(path) as f:
        return json.load(f, parse_constant=_parse_invalid_const)


def json_loadr(url: str) -> Any:
    """Fetch and deserialize a remote JSON resource, returning a JSON-compatible Python object."""
    if requests is None:
        _import_requests()
    r = requests.get(url)
    r.raise_for_status()
    return r.json(parse_constant=_parse_invalid_const)


def json_loads(value: str) -> Any:
    """Deserialize a JSON string, returning a JSON-compatible Python object."""
    return json.loads(value, parse_constant=_parse_invalid_const)


def _parse_invalid_const(c):
    """Called when '-Infinity', 'Infinity' or 'NaN' is encountered in the
    JSON-encoded input. These constants are not allowed in instance or
    output files."""
    raise ValueError(f"{c} is not a valid JSON value")


def _serialize_custom_obj(o):
    if isinstance(o, complex):
        return encode_complex(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f'Object of type {type(o).__name__} is not JSON serializable')


def encode_complex(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(value: Any) -> complex:
    """Decode an ``[re, im]`` pair. A bare real number is accepted too."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
            isinstance(value, Sequence) and not isinstance(value, str) and len(value) == 2 and
            all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise ValueError(f'{value!r} is not a complex number; expected an [re, im] pair')


def encode_block(block: np.ndarray) -> List[List[float]]:
    """Encode a square block as a row-major list of ``[re, im]`` pairs."""
    return [encode_complex(x) for x in np.asarray(block).ravel()]


def decode_block(value: Any, dim: int) -> np.ndarray:
    """Decode a row-major list of ``d²`` ``[re, im]`` pairs into a ``d×d``
    complex array.

    :raise ValueError: if the list has the wrong length or holds
        something other than complex pairs
    """
    if isinstance(value, str) or not isinstance(value, Sequence):
        raise ValueError('a block must be a list of [re, im] pairs')
    if len(value) != dim * dim:
        raise ValueError(f'a block of dimension {dim} needs {dim * dim} entries, got {len(value)}')
    return np.array([decode_complex(x) for x in value], dtype=complex).reshape(dim, dim)


def opnorm(x: np.ndarray) -> float:
    """Operator (spectral) norm of a block, or of each block in a stack."""
    x = np.asarray(x)
    if x.ndim == 2:
        return float(np.linalg.norm(x, 2))
    return np.linalg.svd(x, compute_uv=False)[..., 0]


def trace_norm(x: np.ndarray) -> float:
    """Trace (nuclear) norm: the sum of singular values."""
    return float(np.sum(np.linalg.svd(x, compute_uv=False)))


def smin(x: np.ndarray):
    """Smallest singular value of a block, or of each block in a stack."""
    s = np.linalg.svd(x, compute_uv=False)
    return s[..., -1]


def hermitian_defect(x: np.ndarray) -> float:
    """Relative departure from self-adjointness, ``‖X − X*‖ / max(1, ‖X‖)``."""
    return opnorm(x - x.conj().T) / max(1.0, opnorm(x))
