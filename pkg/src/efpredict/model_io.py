"""Versioned structured-text save/load for every model family.

Files are JSON documents carrying a format version, the model family,
its constructor parameters, and the fitted state. Floats are stored
with 17 significant digits, so a reloaded model predicts identically.
"""

import numpy as np

from .errors import ParseError
from .forest import RandomForestClassifier
from .neighbors import KnnClassifier
from .ordinal import OrdinalLogitClassifier
from .serialize import read_json, write_json_atomic
from .svm import RbfSvmClassifier, _BinarySvm
from .tree import CartTreeClassifier, tree_from_dict, tree_to_dict
from .validation import check_fitted

FORMAT_NAME = "efpredict-model"
FORMAT_VERSION = 1


def _tree_state(model):
    check_fitted(model, "tree_")
    return {
        "tree": tree_to_dict(model.tree_),
        "feature_importances": model.feature_importances_,
        "n_nodes": int(model.n_nodes_),
        "n_features_in": int(model.n_features_in_),
    }


def _tree_restore(model, state):
    model.tree_ = tree_from_dict(state["tree"])
    model.feature_importances_ = np.asarray(
        state["feature_importances"], dtype=np.float64
    )
    model.n_nodes_ = int(state["n_nodes"])
    model.n_features_in_ = int(state["n_features_in"])


def _forest_state(model):
    check_fitted(model, "trees_")
    return {
        "trees": [tree_to_dict(t) for t in model.trees_],
        "tree_importances": model.tree_importances_,
        "node_histogram": model.node_histogram_,
        "oob_error_curve": model.oob_error_curve_,
        "mtry": int(model.mtry_),
        "n_features_in": int(model.n_features_in_),
    }


def _forest_restore(model, state):
    model.trees_ = [tree_from_dict(t) for t in state["trees"]]
    model.tree_importances_ = np.asarray(
        state["tree_importances"], dtype=np.float64
    )
    model.gini_importances_ = model.tree_importances_.mean(axis=0)
    model.node_histogram_ = np.asarray(
        state["node_histogram"], dtype=np.int64
    )
    model.oob_error_curve_ = np.asarray(
        state["oob_error_curve"], dtype=np.float64
    )
    model.oob_error_ = float(model.oob_error_curve_[-1])
    model.mtry_ = int(state["mtry"])
    model.n_features_in_ = int(state["n_features_in"])


def _knn_state(model):
    check_fitted(model, "X_")
    return {
        "X": model.X_,
        "y": model.y_,
        "n_features_in": int(model.n_features_in_),
    }


def _knn_restore(model, state):
    model.X_ = np.asarray(state["X"], dtype=np.float64)
    model.y_ = np.asarray(state["y"], dtype=np.int64)
    model.n_features_in_ = int(state["n_features_in"])


def _ordinal_state(model):
    check_fitted(model, "coef_")
    return {
        "coef": model.coef_,
        "thresholds": model.thresholds_,
        "nll": model.nll_,
        "grad_norm": model.grad_norm_,
        "converged": bool(model.converged_),
        "n_iter": int(model.n_iter_),
        "n_features_in": int(model.n_features_in_),
    }


def _ordinal_restore(model, state):
    model.coef_ = np.asarray(state["coef"], dtype=np.float64)
    model.thresholds_ = np.asarray(state["thresholds"], dtype=np.float64)
    model.nll_ = float(state["nll"])
    model.grad_norm_ = float(state["grad_norm"])
    model.converged_ = bool(state["converged"])
    model.n_iter_ = int(state["n_iter"])
    model.n_features_in_ = int(state["n_features_in"])


def _svm_state(model):
    check_fitted(model, "machines_")
    return {
        "gamma": float(model.gamma_),
        "n_features_in": int(model.n_features_in_),
        "machines": [
            {
                "pair": list(m.pair),
                "X": m.X,
                "y": m.y,
                "alpha": m.alpha,
                "bias": float(m.bias),
            }
            for m in model.machines_
        ],
    }


def _svm_restore(model, state):
    model.gamma_ = float(state["gamma"])
    model.n_features_in_ = int(state["n_features_in"])
    model.machines_ = [
        _BinarySvm(
            pair=tuple(int(c) for c in m["pair"]),
            X=np.asarray(m["X"], dtype=np.float64),
            y=np.asarray(m["y"], dtype=np.float64),
            alpha=np.asarray(m["alpha"], dtype=np.float64),
            bias=float(m["bias"]),
            gamma=model.gamma_,
        )
        for m in state["machines"]
    ]


_FAMILIES = {
    "tree": (CartTreeClassifier, _tree_state, _tree_restore),
    "forest": (RandomForestClassifier, _forest_state, _forest_restore),
    "knn": (KnnClassifier, _knn_state, _knn_restore),
    "ordinal_logit": (
        OrdinalLogitClassifier,
        _ordinal_state,
        _ordinal_restore,
    ),
    "svm": (RbfSvmClassifier, _svm_state, _svm_restore),
}


def family_of(model):
    for family, (cls, _, _) in _FAMILIES.items():
        if type(model) is cls:
            return family
    raise ValueError(f"unsupported model type {type(model).__name__}")


def save_model(model, path):
    """Write a fitted model to ``path`` as versioned JSON."""
    family = family_of(model)
    _, dump, _ = _FAMILIES[family]
    document = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "family": family,
        "params": model.get_params(),
        "state": dump(model),
    }
    write_json_atomic(path, document)


def load_model(path):
    """Reconstruct a fitted model saved by :func:`save_model`."""
    document = read_json(path)
    if not isinstance(document, dict) or document.get("format") != FORMAT_NAME:
        raise ParseError(f"{path}: not a model file")
    if document.get("format_version") != FORMAT_VERSION:
        raise ParseError(
            f"{path}: unsupported format version "
            f"{document.get('format_version')!r}"
        )
    family = document.get("family")
    if family not in _FAMILIES:
        raise ParseError(f"{path}: unknown model family {family!r}")
    cls, _, restore = _FAMILIES[family]
    model = cls(**document.get("params", {}))
    restore(model, document["state"])
    return model
