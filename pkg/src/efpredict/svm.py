"""Three-class support vector machine: one-vs-one RBF kernel machines.

Each class pair gets a soft-margin binary machine trained by sequential
minimal optimization (SMO). The pair loops scan candidates in a fixed
order instead of sampling, so training is deterministic. Prediction is a
majority vote over the three machines with ties resolved toward the
lowest class index. Inputs are expected standardized.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import ConvergenceError
from .schema import CLASS_LABELS, N_CLASSES
from .validation import check_fitted, check_labels, check_matrix

CLASS_PAIRS = ((0, 1), (0, 2), (1, 2))


def rbf_kernel(A, B, gamma):
    """Gaussian kernel exp(-gamma * ||a - b||^2) for all row pairs."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


class _BinarySvm:
    """One trained pairwise machine on +/-1 targets."""

    def __init__(self, pair, X, y, alpha, bias, gamma):
        self.pair = pair
        self.X = X
        self.y = y
        self.alpha = alpha
        self.bias = bias
        self.gamma = gamma

    def decision(self, X):
        K = rbf_kernel(X, self.X, self.gamma)
        return K @ (self.alpha * self.y) + self.bias

    def support_count(self, threshold=1e-12):
        return int(np.sum(self.alpha > threshold))


def _kkt_violation(alpha, y, E, C, scope=None):
    """Largest KKT residual; ``scope`` restricts to those rows."""
    r = y * E
    below = np.where(alpha < C, np.maximum(0.0, -r), 0.0)
    above = np.where(alpha > 0, np.maximum(0.0, r), 0.0)
    worst = np.maximum(below, above)
    if scope is not None:
        worst = worst[scope]
    return float(worst.max()) if worst.size else 0.0


def _smo(K, y, C, tol, max_epochs):
    """Platt's SMO with deterministic candidate scans.

    Args:
        K: kernel Gram matrix (n, n).
        y: +/-1 targets.
        C: box constraint.
        tol: KKT tolerance.
        max_epochs: scan budget before declaring non-convergence.

    Returns:
        (alpha, bias) at a KKT point within ``tol``.
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    state = {"b": 0.0}
    E = K @ (alpha * y) + state["b"] - y

    def take_step(i, j):
        nonlocal E
        if i == j:
            return False
        if y[i] != y[j]:
            low = max(0.0, alpha[j] - alpha[i])
            high = min(C, C + alpha[j] - alpha[i])
        else:
            low = max(0.0, alpha[i] + alpha[j] - C)
            high = min(C, alpha[i] + alpha[j])
        if low >= high:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= 0.0:
            return False
        a_j = alpha[j] + y[j] * (E[i] - E[j]) / eta
        a_j = min(max(a_j, low), high)
        if abs(a_j - alpha[j]) < 1e-12 * (a_j + alpha[j] + 1e-12):
            return False
        a_i = alpha[i] + y[i] * y[j] * (alpha[j] - a_j)
        d_i = a_i - alpha[i]
        d_j = a_j - alpha[j]
        b1 = (
            state["b"]
            - E[i]
            - y[i] * d_i * K[i, i]
            - y[j] * d_j * K[i, j]
        )
        b2 = (
            state["b"]
            - E[j]
            - y[i] * d_i * K[i, j]
            - y[j] * d_j * K[j, j]
        )
        if 0.0 < a_i < C:
            new_b = b1
        elif 0.0 < a_j < C:
            new_b = b2
        else:
            new_b = 0.5 * (b1 + b2)
        delta_b = new_b - state["b"]
        E += y[i] * d_i * K[:, i] + y[j] * d_j * K[:, j] + delta_b
        alpha[i] = a_i
        alpha[j] = a_j
        state["b"] = new_b
        return True

    def examine(i):
        r = E[i] * y[i]
        if not ((r < -tol and alpha[i] < C) or (r > tol and alpha[i] > 0)):
            return False
        non_bound = np.flatnonzero((alpha > 0) & (alpha < C))
        if non_bound.size > 1:
            j = int(non_bound[np.argmax(np.abs(E[i] - E[non_bound]))])
            if take_step(i, j):
                return True
        for j in non_bound:
            if take_step(i, int(j)):
                return True
        for j in range(n):
            if take_step(i, j):
                return True
        return False

    examine_all = True
    changed = 0
    epochs = 0
    while changed > 0 or examine_all:
        epochs += 1
        if epochs > max_epochs:
            raise ConvergenceError(
                "SMO epoch budget exhausted; largest KKT violation "
                f"{_kkt_violation(alpha, y, E, C):.3e} (tolerance {tol:g})"
            )
        changed = 0
        if examine_all:
            candidates = range(n)
        else:
            candidates = np.flatnonzero((alpha > 0) & (alpha < C))
        for i in candidates:
            changed += int(examine(int(i)))
        if examine_all:
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alpha, _final_bias(K, y, alpha, C, state["b"])


def _final_bias(K, y, alpha, C, fallback):
    """Offset satisfying the KKT conditions for the final multipliers.

    Free (strictly interior) support vectors pin the offset exactly, so
    average over them. With every multiplier at a bound the offset is
    only constrained to an interval; take its midpoint.
    """
    raw = K @ (alpha * y)
    target = y - raw
    at_zero = alpha <= 1e-12
    at_box = alpha >= C - 1e-12
    free = ~at_zero & ~at_box
    if free.any():
        return float(np.mean(target[free]))
    lower = target[(at_zero & (y > 0)) | (at_box & (y < 0))]
    upper = target[(at_box & (y > 0)) | (at_zero & (y < 0))]
    if lower.size and upper.size:
        return float(0.5 * (lower.max() + upper.min()))
    if lower.size:
        return float(lower.max())
    if upper.size:
        return float(upper.min())
    return fallback


class RbfSvmClassifier(BaseEstimator, ClassifierMixin):
    """One-vs-one RBF support vector classifier.

    Parameters
    ----------
    C : float
        Soft-margin box constraint.
    gamma : float or None
        RBF width; None means 1 / n_features.
    tol : float
        KKT tolerance for SMO termination.
    max_epochs : int
        SMO scan budget per pairwise machine.

    Attributes
    ----------
    machines_ : list of three fitted pairwise machines.
    """

    def __init__(self, C=1.0, gamma=None, tol=1e-3, max_epochs=1000):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_epochs = max_epochs

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_labels(y, n_rows=X.shape[0])
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        counts = np.bincount(y, minlength=N_CLASSES)
        missing = [c for c in CLASS_LABELS if counts[c] == 0]
        if missing:
            raise ValueError(f"classes {missing} have no training rows")
        gamma = self.gamma if self.gamma is not None else 1.0 / X.shape[1]
        machines = []
        for first, second in CLASS_PAIRS:
            keep = np.flatnonzero((y == first) | (y == second))
            X_pair = X[keep]
            y_pair = np.where(y[keep] == first, 1.0, -1.0)
            K = rbf_kernel(X_pair, X_pair, gamma)
            try:
                alpha, bias = _smo(
                    K, y_pair, float(self.C), float(self.tol),
                    int(self.max_epochs),
                )
            except ConvergenceError as exc:
                raise ConvergenceError(
                    f"pair {first}-vs-{second}: {exc}"
                ) from exc
            machines.append(
                _BinarySvm(
                    (first, second), X_pair, y_pair, alpha, bias, gamma
                )
            )
        self.machines_ = machines
        self.gamma_ = gamma
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Majority vote across pairs; ties go to the lowest class."""
        check_fitted(self, "machines_")
        X = check_matrix(X, n_features=self.n_features_in_)
        votes = np.zeros((X.shape[0], N_CLASSES), dtype=np.int64)
        for machine in self.machines_:
            decision = machine.decision(X)
            first, second = machine.pair
            winner = np.where(decision >= 0.0, first, second)
            votes[np.arange(X.shape[0]), winner] += 1
        return np.argmax(votes, axis=1).astype(np.int64)
