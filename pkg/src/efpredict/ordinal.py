"""Proportional-odds ordinal logistic regression for three classes.

The model puts P(y <= j | x) = sigmoid(theta_j - beta.x) with ordered
thresholds theta_1 < theta_2 shared across one coefficient vector.
Training minimizes the exact negative log-likelihood by gradient descent
with backtracking line search from a fixed start (beta = 0, thresholds
-1 and 1), so fitting is deterministic. The gap between thresholds is
optimized on a log scale, which keeps their order a structural fact.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import ConvergenceError
from .validation import check_fitted, check_labels, check_matrix


def _softplus(z):
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def olr_negative_log_likelihood(beta, theta, X, y):
    """Exact negative log-likelihood and its gradient.

    Args:
        beta: coefficient vector (p,).
        theta: ordered thresholds (2,), theta[0] < theta[1].
        X: feature matrix (n, p).
        y: labels in {0, 1, 2}.

    Returns:
        (nll, grad) with grad laid out as (d beta..., d theta1, d theta2).

    Raises:
        FloatingPointError: a probability underflowed to zero; the caller
            should shrink its step.
    """
    beta = np.asarray(beta, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if theta.shape != (2,) or not theta[0] < theta[1]:
        raise ValueError("theta must be two strictly increasing thresholds")
    if beta.shape != (X.shape[1],):
        raise ValueError("beta length must match the feature count")

    eta = X @ beta
    u = theta[0] - eta
    v = theta[1] - eta

    nll = 0.0
    grad_beta = np.zeros_like(beta)
    grad_t1 = 0.0
    grad_t2 = 0.0

    low = y == 0
    mid = y == 1
    high = y == 2

    if low.any():
        u0 = u[low]
        nll += float(np.sum(_softplus(-u0)))
        s = _sigmoid(-u0)
        grad_t1 += float(-np.sum(s))
        grad_beta += X[low].T @ s
    if high.any():
        v2 = v[high]
        nll += float(np.sum(_softplus(v2)))
        s = _sigmoid(v2)
        grad_t2 += float(np.sum(s))
        grad_beta -= X[high].T @ s
    if mid.any():
        u1 = u[mid]
        v1 = v[mid]
        with np.errstate(divide="ignore", over="ignore"):
            log_p = (
                -_softplus(u1) - _softplus(-v1) + np.log1p(-np.exp(u1 - v1))
            )
            if not np.all(np.isfinite(log_p)):
                raise FloatingPointError(
                    "middle-class probability underflowed to zero"
                )
            nll += float(-np.sum(log_p))
            ratio_u = np.exp(-_softplus(u1) - _softplus(-u1) - log_p)
            ratio_v = np.exp(-_softplus(v1) - _softplus(-v1) - log_p)
        grad_t1 += float(np.sum(ratio_u))
        grad_t2 += float(-np.sum(ratio_v))
        grad_beta += X[mid].T @ (ratio_v - ratio_u)

    grad = np.concatenate([grad_beta, [grad_t1, grad_t2]])
    if not (np.isfinite(nll) and np.all(np.isfinite(grad))):
        raise FloatingPointError(
            "non-finite likelihood term; reduce the step size"
        )
    return nll, grad


class OrdinalLogitClassifier(BaseEstimator, ClassifierMixin):
    """Cumulative-logit classifier trained by deterministic descent.

    Parameters
    ----------
    max_iter : int
        Iteration budget for gradient descent.
    tol : float
        Convergence threshold on the norm of the full-likelihood
        gradient.

    Attributes
    ----------
    coef_ : ndarray of shape (p,)
        Shared coefficient vector.
    thresholds_ : ndarray of shape (2,)
        Ordered cutpoints, strictly increasing.
    converged_ : bool
        Whether the gradient norm fell below ``tol``.
    """

    def __init__(self, max_iter=5000, tol=1e-4):
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_labels(y, n_rows=X.shape[0])
        if X.shape[0] == 0:
            raise ValueError("cannot fit on zero rows")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        p = X.shape[1]

        def unpack(w):
            beta = w[:p]
            theta1 = w[p]
            theta2 = theta1 + np.exp(w[p + 1])
            return beta, np.array([theta1, theta2])

        def value_and_grad(w):
            beta, theta = unpack(w)
            if not np.all(np.isfinite(theta)) or not theta[0] < theta[1]:
                raise FloatingPointError("threshold gap under- or overflow")
            nll, grad = olr_negative_log_likelihood(beta, theta, X, y)
            gap_grad = grad[p + 1] * np.exp(w[p + 1])
            reduced = np.concatenate(
                [grad[:p], [grad[p] + grad[p + 1], gap_grad]]
            )
            return nll, reduced

        w = np.zeros(p + 2)
        w[p] = -1.0
        w[p + 1] = np.log(2.0)
        value, grad = value_and_grad(w)
        step = 1.0
        n_iter = 0
        for n_iter in range(1, self.max_iter + 1):
            norm = float(np.linalg.norm(grad))
            if norm < self.tol:
                break
            accepted = False
            trial = min(step * 2.0, 1e6)
            for _ in range(80):
                candidate = w - trial * grad
                try:
                    cand_value, cand_grad = value_and_grad(candidate)
                except FloatingPointError:
                    trial *= 0.5
                    continue
                if cand_value <= value - 1e-4 * trial * norm * norm:
                    w, value, grad, step = candidate, cand_value, cand_grad, trial
                    accepted = True
                    break
                trial *= 0.5
            if not accepted:
                break

        beta, theta = unpack(w)
        if not theta[0] < theta[1]:
            raise ConvergenceError("threshold order violated")
        self.coef_ = beta
        self.thresholds_ = theta
        self.nll_ = float(value)
        self.grad_norm_ = float(np.linalg.norm(grad))
        self.converged_ = self.grad_norm_ < self.tol
        self.n_iter_ = n_iter
        self.n_features_in_ = p
        return self

    def predict_proba(self, X):
        check_fitted(self, "coef_")
        X = check_matrix(X, n_features=self.n_features_in_)
        eta = X @ self.coef_
        c1 = _sigmoid(self.thresholds_[0] - eta)
        c2 = _sigmoid(self.thresholds_[1] - eta)
        return np.column_stack([c1, c2 - c1, 1.0 - c2])

    def predict(self, X):
        """Most probable class; ties go to the lowest class index."""
        return np.argmax(self.predict_proba(X), axis=1).astype(np.int64)
