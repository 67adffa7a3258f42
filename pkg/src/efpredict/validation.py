"""Input validation helpers shared by the estimators."""

import numpy as np

from .schema import CLASS_LABELS, N_CLASSES


def check_matrix(X, n_features=None, allow_nan=False, name="X"):
    """Coerce ``X`` to a 2-D float64 array and validate its shape.

    Args:
        X: array-like of shape (n_rows, n_features).
        n_features: required column count, or None to accept any.
        allow_nan: whether NaN cells (missing values) are acceptable.
        name: argument name used in error messages.

    Returns:
        A float64 ``numpy`` array copy of the input.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {X.shape}")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(
            f"{name} has {X.shape[1]} columns, expected {n_features}"
        )
    if np.isinf(X).any():
        raise ValueError(f"{name} contains non-finite values")
    if not allow_nan and np.isnan(X).any():
        raise ValueError(f"{name} contains NaN values")
    return X


def check_labels(y, n_rows=None, name="y"):
    """Coerce ``y`` to a 1-D int64 label array in {0, 1, 2}."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {y.shape}")
    if n_rows is not None and y.shape[0] != n_rows:
        raise ValueError(f"{name} has {y.shape[0]} rows, expected {n_rows}")
    if y.shape[0] and not np.issubdtype(y.dtype, np.integer):
        as_float = np.asarray(y, dtype=np.float64)
        if not np.all(as_float == np.floor(as_float)):
            raise ValueError(f"{name} contains non-integer labels")
    y = y.astype(np.int64)
    if y.shape[0] and (y.min() < 0 or y.max() >= N_CLASSES):
        bad = y[(y < 0) | (y >= N_CLASSES)][0]
        raise ValueError(
            f"{name} contains label {bad} outside {set(CLASS_LABELS)}"
        )
    return y


def check_fitted(estimator, attribute):
    """Raise if ``estimator`` lacks a fitted attribute."""
    if not hasattr(estimator, attribute):
        raise ValueError(
            f"{type(estimator).__name__} is not fitted; call fit first"
        )
