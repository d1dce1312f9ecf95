"""
JSON and CSV interchange.

Complex matrices travel as {"rows", "cols", "entries"} with entries in
row-major order as [re, im] pairs. Step functions travel as {"breaks",
"values"}. Floats are written with repr, so output is locale-independent and
byte-stable for identical inputs.
"""

import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any

import jsonschema
import numpy as np
import numpy.typing as npt

from .errors import FormatError

if TYPE_CHECKING:
    from .directsum import ScanTable
    from .lattice import StepFunction

_NUMBER = {"type": "number"}
_COMPLEX = {
    "oneOf": [
        _NUMBER,
        {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
    ]
}

CMATRIX_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "entries": {"type": "array", "items": _COMPLEX},
    },
    "required": ["rows", "cols", "entries"],
}

STEP_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "breaks": {"type": "array", "items": _NUMBER, "minItems": 2},
        "values": {
            "type": "array",
            "items": {"type": "array", "items": _COMPLEX, "minItems": 1},
            "minItems": 1,
        },
    },
    "required": ["breaks", "values"],
}

SCAN_HEADER = ("re", "im", "norm", "attained_M", "attained_n", "certified")


def validate(document: Any, schema: dict[str, Any], what: str) -> None:
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as e:
        raise FormatError(f"malformed {what}: {e.message}") from e


def _to_complex(entry: float | list[float]) -> complex:
    if isinstance(entry, list):
        return complex(entry[0], entry[1])
    return complex(entry)


def encode_cmatrix(a: npt.ArrayLike) -> dict[str, Any]:
    m = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def decode_cmatrix(document: Any) -> npt.NDArray[np.complex128]:
    validate(document, CMATRIX_SCHEMA, "matrix document")
    rows, cols = document["rows"], document["cols"]
    entries = document["entries"]
    if len(entries) != rows * cols:
        raise FormatError(f"malformed matrix document: expected {rows * cols} entries, got {len(entries)}")
    return np.array([_to_complex(e) for e in entries], dtype=np.complex128).reshape(rows, cols)


def encode_step(step: "StepFunction") -> dict[str, Any]:
    return {
        "breaks": [float(b) for b in step.breaks],
        "values": [[[float(z.real), float(z.imag)] for z in row] for row in step.values],
    }


def decode_step(document: Any) -> "StepFunction":
    from .lattice import StepFunction

    validate(document, STEP_SCHEMA, "step function document")
    values = [[_to_complex(e) for e in row] for row in document["values"]]
    if len({len(row) for row in values}) != 1:
        raise FormatError("malformed step function document: values must share one dimension")
    return StepFunction(np.array(document["breaks"], dtype=np.float64), np.array(values, dtype=np.complex128))


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise FormatError(f"malformed JSON in {path}: {e.msg} at line {e.lineno}") from e


def _plain(value: Any) -> Any:
    """JSON-ready copy: numpy scalars unwrapped, non-finite floats as null."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps(document: Any) -> str:
    return json.dumps(_plain(document), indent=2, sort_keys=True, allow_nan=False) + "\n"


def dumps_line(record: Any) -> str:
    """One compact JSON line, for records streamed to stderr."""
    return json.dumps(_plain(record), sort_keys=True, separators=(",", ":"), allow_nan=False)


def format_float(x: float) -> str:
    return repr(float(x))


def scan_table_document(table: "ScanTable") -> dict[str, Any]:
    return {
        "M_max": table.M_max,
        "grid": table.grid,
        "rows": [
            {
                "re": row.lam.real,
                "im": row.lam.imag,
                "norm": row.norm,
                "attained_M": row.attained_M,
                "attained_n": row.attained_n,
                "certified": row.certified,
                "upper_bound": row.upper_bound,
            }
            for row in table.rows
        ],
        "notes": list(table.notes),
        "violations": list(table.violations),
    }


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def rows_csv(header: tuple[str, ...], rows: list[tuple[Any, ...]]) -> str:
    """CSV with '.' decimals and lowercase booleans; None becomes an empty cell."""
    lines = [",".join(header)]
    lines.extend(",".join(_cell(value) for value in row) for row in rows)
    return "\n".join(lines) + "\n"


def scan_table_csv(table: "ScanTable", with_upper_bound: bool = False) -> str:
    header = SCAN_HEADER + (("upper_bound",) if with_upper_bound else ())
    rows = []
    for row in table.rows:
        cells = (row.lam.real, row.lam.imag, row.norm, row.attained_M, row.attained_n, row.certified)
        rows.append(cells + ((row.upper_bound,) if with_upper_bound else ()))
    return rows_csv(header, rows)
