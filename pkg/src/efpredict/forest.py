"""Random decision forest over bootstrapped Gini trees.

Each tree trains on a bootstrap sample (n draws with replacement) and
considers ``mtry`` freshly sampled candidate features at every split.
Every tree owns a private random stream derived from (seed, tree index),
so the fitted forest is identical whatever the worker count. The forest
also records its standard diagnostics: cumulative out-of-bag error after
each tree, the node count per tree, and per-feature Gini importance
averaged over trees.
"""

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, ClassifierMixin

from .rng import derive_seed
from .schema import N_CLASSES
from .tree import grow_tree, predict_tree
from .validation import check_fitted, check_labels, check_matrix


def _fit_one_tree(X, y, tree_index, seed, mtry, min_leaf, max_depth):
    rng = np.random.default_rng(derive_seed(seed, "tree", tree_index))
    n = X.shape[0]
    bootstrap = rng.integers(0, n, size=n)
    root, importance, n_nodes = grow_tree(
        X[bootstrap],
        y[bootstrap],
        min_leaf=min_leaf,
        max_depth=max_depth,
        mtry=mtry,
        rng=rng,
    )
    in_bag = np.zeros(n, dtype=bool)
    in_bag[bootstrap] = True
    oob_rows = np.flatnonzero(~in_bag)
    oob_pred = predict_tree(root, X[oob_rows]) if oob_rows.size else oob_rows
    return root, importance, n_nodes, oob_rows, oob_pred


class RandomForestClassifier(BaseEstimator, ClassifierMixin):
    """Majority-vote ensemble of bootstrapped Gini trees.

    Parameters
    ----------
    n_trees : int
        Number of trees.
    mtry : int or None
        Candidate features sampled per split; None means floor(sqrt(p)).
    min_leaf : int
        Minimum rows per split child.
    max_depth : int or None
        Depth limit per tree.
    seed : int
        Run seed; tree t draws from a substream of (seed, t).
    n_jobs : int
        Worker processes for tree fitting; results do not depend on it.

    Attributes
    ----------
    trees_ : list
        Fitted tree roots in tree-index order.
    oob_error_curve_ : ndarray of shape (n_trees,)
        Out-of-bag error rate of the ensemble truncated after each tree.
    node_histogram_ : ndarray of shape (n_trees,)
        Node count (internal plus leaves) of each tree.
    gini_importances_ : ndarray of shape (p,)
        Mean over trees of each feature's total Gini impurity decrease.
    """

    def __init__(
        self,
        n_trees=500,
        mtry=None,
        min_leaf=1,
        max_depth=None,
        seed=0,
        n_jobs=1,
    ):
        self.n_trees = n_trees
        self.mtry = mtry
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.seed = seed
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_labels(y, n_rows=X.shape[0])
        n, p = X.shape
        if n == 0:
            raise ValueError("cannot fit a forest on zero rows")
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be at least 1, got {self.n_trees}")
        mtry = self.mtry if self.mtry is not None else int(np.sqrt(p))
        if not 1 <= mtry <= p:
            raise ValueError(f"mtry must be in [1, {p}], got {mtry}")

        fits = Parallel(n_jobs=self.n_jobs)(
            delayed(_fit_one_tree)(
                X, y, t, self.seed, mtry, self.min_leaf, self.max_depth
            )
            for t in range(self.n_trees)
        )

        votes = np.zeros((n, N_CLASSES), dtype=np.int64)
        curve = np.empty(self.n_trees, dtype=np.float64)
        trees = []
        importances = np.empty((self.n_trees, p), dtype=np.float64)
        histogram = np.empty(self.n_trees, dtype=np.int64)
        for t, (root, importance, n_nodes, oob_rows, oob_pred) in enumerate(
            fits
        ):
            trees.append(root)
            importances[t] = importance
            histogram[t] = n_nodes
            if oob_rows.size:
                np.add.at(votes, (oob_rows, oob_pred), 1)
            voted = votes.sum(axis=1) > 0
            if voted.any():
                ensemble = np.argmax(votes[voted], axis=1)
                curve[t] = float(np.mean(ensemble != y[voted]))
            else:
                curve[t] = np.nan

        self.trees_ = trees
        self.tree_importances_ = importances
        self.gini_importances_ = importances.mean(axis=0)
        self.node_histogram_ = histogram
        self.oob_error_curve_ = curve
        self.oob_error_ = float(curve[-1])
        self.mtry_ = mtry
        self.n_features_in_ = p
        return self

    @property
    def feature_importances_(self):
        check_fitted(self, "gini_importances_")
        return self.gini_importances_

    def vote_counts(self, X):
        """Per-row class vote counts across all trees."""
        check_fitted(self, "trees_")
        X = check_matrix(X, n_features=self.n_features_in_)
        votes = np.zeros((X.shape[0], N_CLASSES), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for root in self.trees_:
            votes[rows, predict_tree(root, X)] += 1
        return votes

    def predict(self, X):
        """Majority vote over trees; ties go to the lowest class index."""
        return np.argmax(self.vote_counts(X), axis=1).astype(np.int64)
