"""k-nearest-neighbor classifier on Euclidean distance.

Expects standardized features so no column dominates the metric. The
neighbor count must be odd to reduce vote ties; remaining ties go to the
lowest class index. Equal distances at the neighborhood boundary resolve
to the lower training-row index.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .schema import N_CLASSES
from .validation import check_fitted, check_labels, check_matrix


class KnnClassifier(BaseEstimator, ClassifierMixin):
    """Majority vote among the k nearest training rows.

    Parameters
    ----------
    n_neighbors : int
        Neighborhood size; must be odd and at most the training size.
    """

    def __init__(self, n_neighbors=5):
        self.n_neighbors = n_neighbors

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_labels(y, n_rows=X.shape[0])
        k = int(self.n_neighbors)
        if k < 1 or k % 2 == 0:
            raise ValueError(f"n_neighbors must be odd, got {k}")
        if k > X.shape[0]:
            raise ValueError(
                f"n_neighbors={k} exceeds the {X.shape[0]} training rows"
            )
        self.X_ = X.copy()
        self.y_ = y.copy()
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_fitted(self, "X_")
        X = check_matrix(X, n_features=self.n_features_in_)
        diff = X[:, None, :] - self.X_[None, :, :]
        squared = np.einsum("qnp,qnp->qn", diff, diff)
        order = np.argsort(squared, axis=1, kind="stable")
        nearest = self.y_[order[:, : self.n_neighbors]]
        out = np.empty(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            votes = np.bincount(nearest[i], minlength=N_CLASSES)
            out[i] = int(np.argmax(votes))
        return out
