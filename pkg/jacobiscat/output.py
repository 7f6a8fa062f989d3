import csv
import io
import math
from dataclasses import dataclass, field
from numbers import Complex, Real
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from jacobiscat.utils import encode_complex, json_dumps

__all__ = [
    'Table',
    'OutputFormatter',
    'output_formatter',
    'create_output',
]


@dataclass
class Table:
    """A named, versioned table of results.

    Rows are sequences aligned with `columns`. Cells may be numbers
    (complex included), strings, booleans or ``None``.
    """
    name: str
    columns: List[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    schema: int = 1

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f'Table {self.name!r} has {len(self.columns)} columns, got {len(values)} values')
        self.rows.append(values)

    def complex_columns(self) -> List[bool]:
        return [
            any(_is_complex(row[i]) for row in self.rows)
            for i in range(len(self.columns))
        ]


OutputFormatter = Callable[..., str]
"""Call signature for a function decorated with :func:`output_formatter`.

The function must take a sequence of :class:`Table` objects as its
first argument and return the serialized text.
"""

_formatters: Dict[str, OutputFormatter] = {}


def output_formatter(format: str):
    """A decorator for a table output formatting function.

    :param format: A string identifying the output format.
    """

    def decorator(f: OutputFormatter):
        _formatters[format] = f
        return f

    return decorator


def create_output(tables: Sequence[Table], format: str, **kwargs: Any) -> str:
    try:
        formatter = _formatters[format]
    except KeyError:
        raise ValueError(f'Unknown output format {format!r}') from None
    return formatter(tables, **kwargs)


def _is_complex(value: Any) -> bool:
    return isinstance(value, Complex) and not isinstance(value, (Real, bool))


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Real):
        return repr(float(value))
    return str(value)


def _finite(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Real):
        value = float(value)
        return value if math.isfinite(value) else None
    if _is_complex(value):
        re, im = encode_complex(value)
        return [re, im] if math.isfinite(re) and math.isfinite(im) else None
    return value


@output_formatter('csv')
def csv_output(tables: Sequence[Table]) -> str:
    """One block per table: a ``# <name> schema <v>`` comment line, the
    header row, then the rows. Complex columns are split into
    ``<column>_re`` and ``<column>_im``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    for i, table in enumerate(tables):
        if i:
            buffer.write('\n')
        buffer.write(f'# {table.name} schema {table.schema}\n')
        split = table.complex_columns()
        header = []
        for column, is_complex in zip(table.columns, split):
            header += [f'{column}_re', f'{column}_im'] if is_complex else [column]
        writer.writerow(header)
        for row in table.rows:
            cells = []
            for value, is_complex in zip(row, split):
                if is_complex:
                    value = complex(value) if value is not None else None
                    cells += ['', ''] if value is None else [_cell(value.real), _cell(value.imag)]
                else:
                    cells.append(_cell(value))
            writer.writerow(cells)
    return buffer.getvalue()


@output_formatter('json')
def json_output(tables: Sequence[Table], indent: int = 2) -> str:
    """A single object keyed by table name; complex cells are ``[re, im]``
    pairs and non-finite numbers are ``null``."""
    return json_dumps({
        table.name: {
            'schema': table.schema,
            'columns': list(table.columns),
            'rows': [[_finite(value) for value in row] for row in table.rows],
        }
        for table in tables
    }, indent=indent) + '\n'
