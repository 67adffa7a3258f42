"""Dataset container and comma-separated text input/output.

Files carry a header row with the schema's input columns plus the target.
Empty feature cells mean missing; the in-memory matrix stores NaN there
and a boolean mask records the same positions. Target cells may never be
empty. Saving and reloading a dataset is lossless, and saving the reload
reproduces the file byte for byte.
"""

import csv
import io
import os

from dataclasses import dataclass, field

import numpy as np

from .errors import LabelError, ParseError, SchemaError
from .schema import BINARY, CLASS_LABELS, FeatureSchema
from .serialize import write_text_atomic


@dataclass(frozen=True)
class Dataset:
    """Feature matrix, ordinal labels, and the missing-cell mask."""

    schema: FeatureSchema
    X: np.ndarray
    y: np.ndarray
    missing_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != self.schema.width:
            raise ValueError(
                f"X has shape {X.shape}, schema expects width "
                f"{self.schema.width}"
            )
        if y.shape != (X.shape[0],):
            raise ValueError(
                f"y has shape {y.shape}, expected ({X.shape[0]},)"
            )
        if y.size and (y.min() < 0 or y.max() > max(CLASS_LABELS)):
            raise LabelError("labels must lie in {0, 1, 2}")
        mask = self.missing_mask
        if mask is None:
            mask = np.isnan(X)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != X.shape:
            raise ValueError("missing_mask shape must match X")
        if not np.array_equal(mask, np.isnan(X)):
            raise ValueError("missing_mask must mark exactly the NaN cells")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "missing_mask", mask)

    @property
    def n_rows(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    def class_counts(self):
        return np.bincount(self.y, minlength=len(CLASS_LABELS))

    def take_rows(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            schema=self.schema,
            X=self.X[indices].copy(),
            y=self.y[indices].copy(),
        )

    def select_features(self, names):
        """Return a dataset restricted to the named columns."""
        sub = self.schema.subset(names)
        cols = [self.schema.index_of(c.name) for c in sub.columns]
        return Dataset(schema=sub, X=self.X[:, cols].copy(), y=self.y.copy())

    def replace(self, X=None, y=None):
        return Dataset(
            schema=self.schema,
            X=self.X if X is None else X,
            y=self.y if y is None else y,
        )


def _parse_feature(text, kind, row, name):
    text = text.strip()
    if text == "":
        return np.nan
    try:
        value = float(text)
    except ValueError as exc:
        raise ParseError(
            f"row {row}, column {name!r}: {text!r} is not numeric"
        ) from exc
    if not np.isfinite(value):
        raise ParseError(
            f"row {row}, column {name!r}: non-finite value {text!r}"
        )
    if kind == BINARY and value not in (0.0, 1.0):
        raise ParseError(
            f"row {row}, column {name!r}: binary cell must be 0 or 1, "
            f"got {text!r}"
        )
    return value


def _parse_label(text, row, target):
    text = text.strip()
    try:
        value = int(text)
    except ValueError as exc:
        raise LabelError(
            f"row {row}, column {target!r}: {text!r} is not an integer label"
        ) from exc
    if value not in CLASS_LABELS:
        raise LabelError(
            f"row {row}, column {target!r}: label {value} outside "
            f"{set(CLASS_LABELS)}"
        )
    return value


def load_dataset(path, schema):
    """Read a comma-separated file into a :class:`Dataset`.

    The header must contain exactly the schema's input columns plus the
    target, in any order. Empty feature cells become missing values.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return _load_from_stream(handle, schema, os.fspath(path))


def loads_dataset(text, schema):
    """Parse comma-separated text (header included) into a dataset."""
    return _load_from_stream(io.StringIO(text), schema, "<string>")


def _load_from_stream(stream, schema, source):
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"{source}: empty file, header row required")
    header = [h.strip() for h in header]
    expected = set(schema.names) | {schema.target}
    seen = set()
    for name in header:
        if name not in expected:
            raise SchemaError(f"{source}: unexpected column {name!r}")
        if name in seen:
            raise SchemaError(f"{source}: duplicate column {name!r}")
        seen.add(name)
    for name in sorted(expected - seen):
        raise SchemaError(f"{source}: missing column {name!r}")

    positions = {name: i for i, name in enumerate(header)}
    target_pos = positions[schema.target]
    feature_pos = [positions[name] for name in schema.names]
    kinds = [c.kind for c in schema.columns]

    rows = []
    labels = []
    for row_number, cells in enumerate(reader, start=1):
        if len(cells) != len(header):
            raise ParseError(
                f"row {row_number}: expected {len(header)} cells, "
                f"got {len(cells)}"
            )
        values = [
            _parse_feature(cells[pos], kind, row_number, name)
            for pos, kind, name in zip(feature_pos, kinds, schema.names)
        ]
        labels.append(_parse_label(cells[target_pos], row_number, schema.target))
        rows.append(values)

    X = np.asarray(rows, dtype=np.float64).reshape(len(rows), schema.width)
    y = np.asarray(labels, dtype=np.int64)
    return Dataset(schema=schema, X=X, y=y)


def _format_cell(value, kind, missing):
    if missing:
        return ""
    if kind == BINARY or value == int(value):
        return str(int(value))
    return repr(float(value))


def dumps_dataset(dataset):
    """Render a dataset as comma-separated text in schema column order."""
    schema = dataset.schema
    kinds = [c.kind for c in schema.columns]
    lines = [",".join(list(schema.names) + [schema.target])]
    for i in range(dataset.n_rows):
        cells = [
            _format_cell(dataset.X[i, j], kinds[j], dataset.missing_mask[i, j])
            for j in range(schema.width)
        ]
        cells.append(str(int(dataset.y[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def save_dataset(dataset, path):
    """Write a dataset to ``path`` atomically."""
    write_text_atomic(path, dumps_dataset(dataset))
