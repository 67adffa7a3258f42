"""Preprocessing stages: imputation, balancing, scaling, fold planning."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import BalanceError, FoldError, ImputationError, ScalingError
from .schema import CLASS_LABELS
from .validation import check_fitted, check_labels, check_matrix


class MedianModeImputer(BaseEstimator, TransformerMixin):
    """Fill missing cells with the column median (continuous) or mode (binary).

    The median of an even count is the mean of the two middle values. The
    binary mode breaks a 0/1 tie toward 0. Columns listed in
    ``binary_columns`` take the mode; all others take the median.
    """

    def __init__(self, binary_columns=()):
        self.binary_columns = binary_columns

    def fit(self, X, y=None):
        X = check_matrix(X, allow_nan=True)
        binary = set(int(i) for i in self.binary_columns)
        fill = np.empty(X.shape[1], dtype=np.float64)
        for j in range(X.shape[1]):
            observed = X[~np.isnan(X[:, j]), j]
            if observed.size == 0:
                raise ImputationError(
                    f"column {j} has no observed values to impute from"
                )
            if j in binary:
                ones = int(np.sum(observed == 1.0))
                zeros = observed.size - ones
                fill[j] = 1.0 if ones > zeros else 0.0
            else:
                fill[j] = float(np.median(observed))
        self.fill_values_ = fill
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_fitted(self, "fill_values_")
        X = check_matrix(X, n_features=self.n_features_in_, allow_nan=True)
        out = X.copy()
        holes = np.isnan(out)
        out[holes] = np.broadcast_to(self.fill_values_, out.shape)[holes]
        return out


class ColumnStandardizer(BaseEstimator, TransformerMixin):
    """Center and scale selected columns to mean 0, sample stddev 1.

    The stddev uses the n-1 (sample) convention. Columns not listed in
    ``columns`` pass through untouched; ``columns=None`` scales all. The
    fitted object carries the per-column means and stddevs, so held-out
    rows can be transformed with the training statistics.
    """

    def __init__(self, columns=None):
        self.columns = columns

    def fit(self, X, y=None):
        X = check_matrix(X)
        if self.columns is None:
            cols = np.arange(X.shape[1])
        else:
            cols = np.asarray(sorted(int(i) for i in self.columns), dtype=int)
            if cols.size and (cols.min() < 0 or cols.max() >= X.shape[1]):
                raise ValueError(
                    f"column indices out of range for width {X.shape[1]}"
                )
        if X.shape[0] < 2 and cols.size:
            raise ScalingError(
                "standardization needs at least two rows for a sample stddev"
            )
        means = np.zeros(X.shape[1])
        scales = np.ones(X.shape[1])
        for j in cols:
            mean = float(np.mean(X[:, j]))
            std = float(np.std(X[:, j], ddof=1))
            if std <= 0.0:
                error = ScalingError(f"column {j} has zero variance")
                error.column_index = int(j)
                raise error
            means[j] = mean
            scales[j] = std
        self.scaled_columns_ = cols
        self.mean_ = means
        self.scale_ = scales
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_fitted(self, "mean_")
        X = check_matrix(X, n_features=self.n_features_in_)
        return (X - self.mean_) / self.scale_


def impute_missing(dataset):
    """Return a copy of ``dataset`` with every missing cell filled in."""
    imputer = MedianModeImputer(binary_columns=dataset.schema.binary_indices)
    filled = imputer.fit(dataset.X).transform(dataset.X)
    return dataset.replace(X=filled), imputer


def standardize(dataset):
    """Scale the continuous columns; binary columns pass through.

    Returns the scaled dataset and the fitted :class:`ColumnStandardizer`
    holding the per-column statistics.
    """
    scaler = ColumnStandardizer(columns=dataset.schema.continuous_indices)
    try:
        scaler.fit(dataset.X)
    except ScalingError as exc:
        index = getattr(exc, "column_index", None)
        if index is not None:
            raise ScalingError(
                f"column {dataset.schema.names[index]!r} has zero variance"
            ) from exc
        raise
    return dataset.replace(X=scaler.transform(dataset.X)), scaler


def upsample_balance(dataset, seed):
    """Resample minority classes with replacement up to the majority count.

    Original rows keep their order; duplicates are appended grouped by
    class in class order. Rows are copied verbatim, so no feature value
    outside the input ever appears.
    """
    y = dataset.y
    counts = dataset.class_counts()
    if (counts == 0).any():
        empty = int(np.flatnonzero(counts == 0)[0])
        raise BalanceError(f"class {empty} has no rows; cannot balance")
    majority = int(counts.max())
    rng = np.random.default_rng(seed)
    extras = []
    for c in CLASS_LABELS:
        need = majority - int(counts[c])
        rows = np.flatnonzero(y == c)
        if need > 0:
            extras.append(rng.choice(rows, size=need, replace=True))
    indices = np.concatenate([np.arange(dataset.n_rows)] + extras)
    return dataset.take_rows(indices)


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each row to one of ``k`` cross-validation folds."""

    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=np.int64)
        if assignments.ndim != 1:
            raise ValueError("assignments must be 1-D")
        if assignments.size and (
            assignments.min() < 0 or assignments.max() >= self.k
        ):
            raise ValueError("fold numbers must lie in [0, k)")
        object.__setattr__(self, "assignments", assignments)

    @property
    def n_rows(self):
        return self.assignments.shape[0]

    def test_indices(self, fold):
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.assignments != fold)

    def iter_splits(self):
        for fold in range(self.k):
            yield fold, self.train_indices(fold), self.test_indices(fold)

    def fold_sizes(self):
        return np.bincount(self.assignments, minlength=self.k)


def stratified_folds(y, k, seed):
    """Assign rows to ``k`` folds, stratified by class.

    Rows of each class are shuffled, then dealt round-robin; each class
    continues at the fold after the previous class stopped, so both the
    global fold sizes and every per-class count differ by at most one
    across folds.
    """
    y = check_labels(y)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    counts = np.bincount(y, minlength=len(CLASS_LABELS))
    for c in CLASS_LABELS:
        if counts[c] < k:
            raise FoldError(
                f"class {c} has {int(counts[c])} rows, fewer than k={k}"
            )
    rng = np.random.default_rng(seed)
    assignments = np.empty(y.shape[0], dtype=np.int64)
    start = 0
    for c in CLASS_LABELS:
        rows = np.flatnonzero(y == c)
        rng.shuffle(rows)
        for offset, row in enumerate(rows):
            assignments[row] = (start + offset) % k
        start = (start + rows.size) % k
    return FoldPlan(k=k, assignments=assignments, seed=int(seed))
