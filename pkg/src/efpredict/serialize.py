"""Deterministic text serialization.

Reports and saved models are JSON documents in which every float is
rendered with 17 significant digits, enough for an exact round trip
through ``float()``. Non-finite values become ``null`` so the output is
always standard JSON. Files are written atomically (temp file + rename),
and repeated runs with identical content produce byte-identical files.
"""

import json
import math
import os
import tempfile

import numpy as np

_INDENT = 2


def _to_builtin(obj):
    """Convert numpy scalars/arrays and tuples to plain Python containers."""
    if isinstance(obj, np.ndarray):
        return [_to_builtin(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    return obj


def format_float(value):
    """Render a float with 17 significant digits; non-finite becomes null."""
    value = float(value)
    if not math.isfinite(value):
        return "null"
    return format(value, ".17g")


def _emit(obj, parts, level):
    pad = " " * (_INDENT * level)
    child_pad = " " * (_INDENT * (level + 1))
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            parts.append(child_pad)
            parts.append(json.dumps(str(key)))
            parts.append(": ")
            _emit(value, parts, level + 1)
            parts.append(",\n" if i < len(obj) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            parts.append("[]")
            return
        parts.append("[\n")
        for i, value in enumerate(obj):
            parts.append(child_pad)
            _emit(value, parts, level + 1)
            parts.append(",\n" if i < len(obj) - 1 else "\n")
        parts.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj):
    """Serialize nested dicts/lists/scalars to deterministic JSON text."""
    parts = []
    _emit(_to_builtin(obj), parts, 0)
    parts.append("\n")
    return "".join(parts)


def from_json(text):
    """Parse JSON text produced by :func:`to_json` (plain ``json.loads``)."""
    return json.loads(text)


def write_text_atomic(path, text):
    """Write text to ``path`` via a temp file and atomic rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path, obj):
    write_text_atomic(path, to_json(obj))


def read_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.loads(handle.read())


def format_csv_cell(value):
    """Render one CSV cell: ints verbatim, floats with 17 digits."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_csv_atomic(path, header, rows):
    """Write a small comma-separated table with a header row."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_csv_cell(v) for v in row))
    write_text_atomic(path, "\n".join(lines) + "\n")
