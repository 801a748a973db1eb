"""Matrix Market / CSV readers and writers, and the JSON report encoder.

Only real general Matrix Market files are accepted, in both ``array``
(column-major, one value per line) and ``coordinate`` (1-based ``i j v``
triplets) layouts. Values are written with 17 significant digits, which is
enough for every float64 to survive a write/read cycle bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionError, ParseError, UnsupportedFormatError

__all__ = [
    "infer_format",
    "parse_matrix_file",
    "parse_matrix_text",
    "load_vector",
    "write_matrix",
    "format_real",
    "dumps",
]

FORMATS = ("matrixmarket", "csv")
_ALIASES = {"mm": "matrixmarket", "mtx": "matrixmarket", "matrixmarket": "matrixmarket",
            "csv": "csv"}
_EXTENSIONS = {".mtx": "matrixmarket", ".mm": "matrixmarket", ".csv": "csv"}


def infer_format(path, fmt=None) -> str:
    if fmt is not None:
        try:
            return _ALIASES[fmt.lower()]
        except KeyError:
            raise UnsupportedFormatError(f"unknown format {fmt!r}") from None
    suffix = Path(path).suffix.lower()
    try:
        return _EXTENSIONS[suffix]
    except KeyError:
        raise UnsupportedFormatError(
            f"cannot infer format from extension {suffix!r}; pass --format", path=path
        ) from None


def _parse_real(token: str, lineno: int, path) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a real number: {token!r}", lineno, path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {token!r}", lineno, path)
    return value


def _parse_int(token: str, lineno: int, path) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"not an integer: {token!r}", lineno, path) from None
    return value


def _parse_mm(text: str, path) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1, path)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing '%%MatrixMarket' header", 1, path)
    obj, layout, field, symmetry = (t.lower() for t in header[1:])
    if obj != "matrix":
        raise UnsupportedFormatError(f"object {obj!r} is not supported", 1, path)
    if layout not in ("array", "coordinate"):
        raise ParseError(f"unknown layout {layout!r}", 1, path)
    if field != "real":
        raise UnsupportedFormatError(f"field {field!r} is not supported (need real)", 1, path)
    if symmetry != "general":
        raise UnsupportedFormatError(
            f"symmetry {symmetry!r} is not supported (need general)", 1, path
        )

    # (line number, tokens) for every non-comment, non-blank line after the header
    body = [(i, line.split()) for i, line in enumerate(lines[1:], start=2)
            if line.strip() and not line.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", len(lines), path)
    size_no, size = body[0]
    expected = 2 if layout == "array" else 3
    if len(size) != expected:
        raise ParseError(f"size line needs {expected} integers", size_no, path)
    dims = [_parse_int(t, size_no, path) for t in size]
    rows, cols = dims[0], dims[1]
    if rows < 1 or cols < 1:
        raise ParseError(f"invalid dimensions {rows} x {cols}", size_no, path)
    entries = body[1:]

    if layout == "array":
        if len(entries) != rows * cols:
            at = entries[rows * cols][0] if len(entries) > rows * cols else len(lines)
            raise ParseError(f"expected {rows * cols} values, found {len(entries)}", at, path)
        values = []
        for lineno, toks in entries:
            if len(toks) != 1:
                raise ParseError("expected one value per line", lineno, path)
            values.append(_parse_real(toks[0], lineno, path))
        return np.array(values, dtype=np.float64).reshape((cols, rows)).T.copy()

    nnz = dims[2]
    if nnz < 0 or nnz > rows * cols:
        raise ParseError(f"invalid entry count {nnz}", size_no, path)
    if len(entries) != nnz:
        at = entries[nnz][0] if len(entries) > nnz else len(lines)
        raise ParseError(f"expected {nnz} entries, found {len(entries)}", at, path)
    out = np.zeros((rows, cols))
    seen = set()
    for lineno, toks in entries:
        if len(toks) != 3:
            raise ParseError("coordinate entries need 'row col value'", lineno, path)
        i = _parse_int(toks[0], lineno, path)
        j = _parse_int(toks[1], lineno, path)
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) outside {rows} x {cols}", lineno, path)
        if (i, j) in seen:
            raise ParseError(f"duplicate entry ({i}, {j})", lineno, path)
        seen.add((i, j))
        out[i - 1, j - 1] = _parse_real(toks[2], lineno, path)
    return out


def _parse_csv(text: str, path) -> np.ndarray:
    rows = []
    width = None
    reader = csv.reader(text.splitlines())
    for lineno, record in enumerate(reader, start=1):
        if not record or all(not f.strip() for f in record):
            continue
        if width is None:
            width = len(record)
        elif len(record) != width:
            raise ParseError(f"row has {len(record)} columns, expected {width}", lineno, path)
        rows.append([_parse_real(f.strip(), lineno, path) for f in record])
    if not rows:
        raise ParseError("no data rows", 1, path)
    return np.array(rows, dtype=np.float64)


def parse_matrix_text(text: str, fmt: str, path=None) -> np.ndarray:
    fmt = infer_format(path, fmt)
    if fmt == "matrixmarket":
        return _parse_mm(text, path)
    return _parse_csv(text, path)


def parse_matrix_file(path, fmt=None) -> np.ndarray:
    """Read a dense matrix; the format defaults to the one implied by the extension."""
    fmt = infer_format(path, fmt)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from None
    except UnicodeDecodeError:
        raise ParseError("file is not text", path=path) from None
    return parse_matrix_text(text, fmt, path)


def load_vector(path, fmt=None):
    """Read a right-hand side stored as one column, or as one row.

    Returns ``(vector, warnings)``; a single row is transposed with a warning.
    """
    mat = parse_matrix_file(path, fmt)
    warnings = []
    if mat.shape[1] == 1:
        return mat[:, 0].copy(), warnings
    if mat.shape[0] == 1:
        warnings.append(f"{path}: right-hand side given as a row; transposed to a column")
        return mat[0].copy(), warnings
    raise DimensionError(f"{path}: right-hand side must be a single row or column, "
                         f"got {mat.shape[0]} x {mat.shape[1]}")


def format_real(value: float) -> str:
    """17 significant digits, always recognisable as a float in JSON/CSV."""
    text = format(float(value), ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def write_matrix(path, mat, fmt=None) -> None:
    """Write ``mat`` (2-D) as a Matrix Market array file or CSV."""
    fmt = infer_format(path, fmt)
    mat = np.atleast_2d(np.asarray(mat, dtype=np.float64))
    if fmt == "matrixmarket":
        lines = ["%%MatrixMarket matrix array real general",
                 f"{mat.shape[0]} {mat.shape[1]}"]
        lines.extend(format_real(v) for v in mat.T.reshape(-1))
    else:
        lines = [",".join(format_real(v) for v in row) for row in mat]
    Path(path).write_text("\n".join(lines) + "\n")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every real written to 17 significant digits."""
    return _encode(obj, indent, 0)
