"""Classification tree built on Gini impurity.

Splits are axis-aligned thresholds at midpoints between consecutive
distinct values of a feature; rows with value <= threshold go left. The
best split minimizes the child-size-weighted Gini impurity; ties resolve
to the earliest candidate feature and then the lowest threshold, so
training is deterministic. Leaves predict their majority class, breaking
ties toward the lowest class index.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .schema import N_CLASSES
from .validation import check_fitted, check_labels, check_matrix


def gini_impurity(counts):
    """Gini impurity 1 - sum(p_c^2) of a class-count vector."""
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 1:
        raise ValueError("counts must be 1-D")
    if (counts < 0).any():
        raise ValueError("counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("counts must sum to a positive total")
    p = counts / total
    return float(1.0 - np.dot(p, p))


@dataclass(frozen=True)
class Leaf:
    """Terminal node: predicted class plus the training class counts."""

    klass: int
    counts: tuple


@dataclass(frozen=True)
class Split:
    """Internal node: feature index, threshold, and both subtrees."""

    feature: int
    threshold: float
    left: object
    right: object


def _majority_class(counts):
    return int(np.argmax(counts))


def _best_split(X, y, features, min_leaf):
    """Find the impurity-minimizing split among candidate features.

    Args:
        X: node feature matrix (n, p), full width.
        y: node labels (n,).
        features: candidate feature indices, in priority order for ties.
        min_leaf: minimum rows each child must keep.

    Returns:
        (feature, threshold, weighted_child_gini) or None if no valid
        split exists.
    """
    n = X.shape[0]
    if n < 2 * min_leaf or n < 2:
        return None
    features = np.asarray(features, dtype=np.int64)
    values = X[:, features]
    order = np.argsort(values, axis=0, kind="stable")
    sorted_values = np.take_along_axis(values, order, axis=0)
    sorted_labels = y[order]

    one_hot = np.zeros((n, features.size, N_CLASSES), dtype=np.float64)
    rows = np.repeat(np.arange(n), features.size)
    cols = np.tile(np.arange(features.size), n)
    one_hot[rows, cols, sorted_labels.ravel()] = 1.0
    prefix = np.cumsum(one_hot, axis=0)

    left_counts = prefix[:-1]
    total = prefix[-1]
    right_counts = total[None, :, :] - left_counts
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left

    with np.errstate(invalid="ignore", divide="ignore"):
        p_left = left_counts / n_left[:, :, None]
        p_right = right_counts / n_right[:, :, None]
        gini_left = 1.0 - np.einsum("ijk,ijk->ij", p_left, p_left)
        gini_right = 1.0 - np.einsum("ijk,ijk->ij", p_right, p_right)
    score = (n_left * gini_left + n_right * gini_right) / n

    usable = sorted_values[:-1] < sorted_values[1:]
    usable &= n_left >= min_leaf
    usable &= n_right >= min_leaf
    score = np.where(usable, score, np.inf)

    by_feature = score.T
    flat = int(np.argmin(by_feature))
    feature_rank, position = divmod(flat, n - 1)
    if not np.isfinite(by_feature[feature_rank, position]):
        return None
    threshold = 0.5 * (
        sorted_values[position, feature_rank]
        + sorted_values[position + 1, feature_rank]
    )
    return (
        int(features[feature_rank]),
        float(threshold),
        float(by_feature[feature_rank, position]),
    )


def grow_tree(X, y, min_leaf=1, max_depth=None, mtry=None, rng=None):
    """Grow a tree and accumulate per-feature impurity decreases.

    ``mtry``, with ``rng``, samples that many candidate features without
    replacement at every split, which is how forests decorrelate trees;
    left as None, every feature is a candidate. Returns the root node,
    the per-feature total impurity decrease (weighted by node share of
    the training rows), and the total node count.
    """
    n, p = X.shape
    if mtry is None:
        mtry = p
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must be in [1, {p}], got {mtry}")
    if min_leaf < 1:
        raise ValueError(f"min_leaf must be at least 1, got {min_leaf}")
    importance = np.zeros(p, dtype=np.float64)
    state = {"nodes": 0}

    def build(rows, depth):
        state["nodes"] += 1
        labels = y[rows]
        counts = np.bincount(labels, minlength=N_CLASSES)
        node_gini = gini_impurity(counts)
        if (
            node_gini == 0.0
            or rows.size < 2 * min_leaf
            or (max_depth is not None and depth >= max_depth)
        ):
            return Leaf(_majority_class(counts), tuple(int(c) for c in counts))
        if mtry < p:
            features = rng.choice(p, size=mtry, replace=False)
        else:
            features = np.arange(p)
        found = _best_split(X[rows], labels, features, min_leaf)
        if found is None:
            return Leaf(_majority_class(counts), tuple(int(c) for c in counts))
        feature, threshold, child_gini = found
        importance[feature] += (rows.size / n) * (node_gini - child_gini)
        goes_left = X[rows, feature] <= threshold
        left = build(rows[goes_left], depth + 1)
        right = build(rows[~goes_left], depth + 1)
        return Split(feature, threshold, left, right)

    root = build(np.arange(n), 0)
    return root, importance, state["nodes"]


def predict_tree(root, X):
    """Route every row of ``X`` to a leaf and return predicted classes."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.int64)

    def descend(node, rows):
        if rows.size == 0:
            return
        if isinstance(node, Leaf):
            out[rows] = node.klass
            return
        goes_left = X[rows, node.feature] <= node.threshold
        descend(node.left, rows[goes_left])
        descend(node.right, rows[~goes_left])

    descend(root, np.arange(X.shape[0]))
    return out


def count_nodes(node):
    """Total number of nodes (internal plus leaves) under ``node``."""
    if isinstance(node, Leaf):
        return 1
    return 1 + count_nodes(node.left) + count_nodes(node.right)


def tree_to_dict(node):
    if isinstance(node, Leaf):
        return {"leaf": True, "class": node.klass, "counts": list(node.counts)}
    return {
        "leaf": False,
        "feature": node.feature,
        "threshold": node.threshold,
        "left": tree_to_dict(node.left),
        "right": tree_to_dict(node.right),
    }


def tree_from_dict(data):
    if data["leaf"]:
        return Leaf(int(data["class"]), tuple(int(c) for c in data["counts"]))
    return Split(
        int(data["feature"]),
        float(data["threshold"]),
        tree_from_dict(data["left"]),
        tree_from_dict(data["right"]),
    )


class CartTreeClassifier(BaseEstimator, ClassifierMixin):
    """Decision tree classifier grown with the Gini criterion.

    Parameters
    ----------
    min_leaf : int
        Minimum rows in each child of a split.
    max_depth : int or None
        Depth limit; None grows until leaves are pure or too small.
    """

    def __init__(self, min_leaf=1, max_depth=None):
        self.min_leaf = min_leaf
        self.max_depth = max_depth

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_labels(y, n_rows=X.shape[0])
        if X.shape[0] == 0:
            raise ValueError("cannot fit a tree on zero rows")
        root, importance, n_nodes = grow_tree(
            X, y, min_leaf=self.min_leaf, max_depth=self.max_depth
        )
        self.tree_ = root
        self.feature_importances_ = importance
        self.n_nodes_ = n_nodes
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_fitted(self, "tree_")
        X = check_matrix(X, n_features=self.n_features_in_)
        return predict_tree(self.tree_, X)
