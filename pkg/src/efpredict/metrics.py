"""Confusion matrices and the derived per-class metric table.

Rows of a confusion matrix are actual classes, columns are predictions.
Precision is the correct share of a prediction column, recall the
correct share of an actual row. F is their harmonic mean, G their
geometric mean. A metric with a zero denominator is undefined and
reported as NaN; macro averages cover only the defined classes.
"""

from dataclasses import dataclass

import numpy as np

from .schema import N_CLASSES
from .validation import check_labels


def confusion_matrix(actual, predicted):
    """Count actual-row by predicted-column pairs into a 3x3 matrix."""
    actual = check_labels(np.asarray(actual), name="actual")
    predicted = check_labels(
        np.asarray(predicted), n_rows=actual.shape[0], name="predicted"
    )
    if actual.shape[0] == 0:
        raise ValueError("cannot build a confusion matrix from zero rows")
    matrix = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(matrix, (actual, predicted), 1)
    return matrix


@dataclass(frozen=True)
class MetricsTable:
    """Per-class metrics plus macro averages and overall accuracy."""

    precision: np.ndarray
    recall: np.ndarray
    f_score: np.ndarray
    g_score: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f: float
    macro_g: float
    accuracy: float

    def metric(self, name):
        return getattr(self, name)

    def to_dict(self):
        return {
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f_score": list(self.f_score),
            "g_score": list(self.g_score),
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f": self.macro_f,
            "macro_g": self.macro_g,
            "accuracy": self.accuracy,
        }

    @classmethod
    def from_dict(cls, data):
        def arr(values):
            return np.array(
                [np.nan if v is None else float(v) for v in values]
            )

        def scalar(value):
            return np.nan if value is None else float(value)

        return cls(
            precision=arr(data["precision"]),
            recall=arr(data["recall"]),
            f_score=arr(data["f_score"]),
            g_score=arr(data["g_score"]),
            macro_precision=scalar(data["macro_precision"]),
            macro_recall=scalar(data["macro_recall"]),
            macro_f=scalar(data["macro_f"]),
            macro_g=scalar(data["macro_g"]),
            accuracy=scalar(data["accuracy"]),
        )


def _macro(values):
    defined = values[~np.isnan(values)]
    return float(defined.mean()) if defined.size else float("nan")


def per_class_metrics(matrix):
    """Derive the metric table from a confusion matrix."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (N_CLASSES, N_CLASSES):
        raise ValueError(f"expected a 3x3 matrix, got shape {matrix.shape}")
    if (matrix < 0).any():
        raise ValueError("confusion counts must be non-negative")
    total = matrix.sum()
    if total <= 0:
        raise ValueError("confusion matrix must contain at least one count")
    diagonal = np.diag(matrix)
    col_sums = matrix.sum(axis=0)
    row_sums = matrix.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(col_sums > 0, diagonal / col_sums, np.nan)
        recall = np.where(row_sums > 0, diagonal / row_sums, np.nan)

    f_score = np.full(N_CLASSES, np.nan)
    g_score = np.full(N_CLASSES, np.nan)
    for c in range(N_CLASSES):
        p, r = precision[c], recall[c]
        if np.isnan(p) or np.isnan(r):
            continue
        f_score[c] = 2.0 * p * r / (p + r) if (p + r) > 0 else 0.0
        g_score[c] = float(np.sqrt(p * r))

    return MetricsTable(
        precision=precision,
        recall=recall,
        f_score=f_score,
        g_score=g_score,
        macro_precision=_macro(precision),
        macro_recall=_macro(recall),
        macro_f=_macro(f_score),
        macro_g=_macro(g_score),
        accuracy=float(np.trace(matrix) / total),
    )


def display_percent(value):
    """Whole-percent display value, rounding halves up; NaN passes through."""
    if value is None or np.isnan(value):
        return None
    return int(np.floor(value * 100.0 + 0.5))


def rmse(predicted, actual):
    """Root mean squared error treating class indices as numbers."""
    predicted = np.asarray(predicted, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if predicted.shape != actual.shape or predicted.ndim != 1:
        raise ValueError("predicted and actual must be equal-length vectors")
    if predicted.shape[0] == 0:
        raise ValueError("rmse needs at least one value")
    return float(np.sqrt(np.mean((predicted - actual) ** 2)))
