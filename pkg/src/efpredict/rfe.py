"""Recursive feature elimination driven by forest importance.

Features are ranked by forest Gini importance (equal scores break by
name), the weakest are dropped to reach each requested subset size, and
every size is scored by k-fold cross-validated RMSE on the numeric class
indices. The selected size is the curve minimum, preferring the smaller
size on ties.
"""

from dataclasses import dataclass

import numpy as np

from .crossval import cross_validate
from .forest import RandomForestClassifier
from .metrics import rmse
from .preprocess import stratified_folds
from .rng import derive_seed
from .serialize import write_csv_atomic


def rank_features(dataset, n_trees=200, mtry=None, min_leaf=1, seed=0):
    """Rank the dataset's features by forest Gini importance.

    Returns (name, importance) pairs, highest first; equal importances
    order lexicographically by name. Every schema feature appears exactly
    once.
    """
    forest = RandomForestClassifier(
        n_trees=n_trees, mtry=mtry, min_leaf=min_leaf, seed=seed
    )
    forest.fit(dataset.X, dataset.y)
    scored = list(zip(dataset.schema.names, forest.gini_importances_))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [(name, float(score)) for name, score in scored]


@dataclass(frozen=True)
class RfeStage:
    """One evaluated subset size along the elimination path."""

    size: int
    features: tuple
    ranking: tuple
    cv_rmse: float


@dataclass(frozen=True)
class RfeResult:
    """Elimination path, RMSE curve, and the selected subset."""

    stages: tuple
    selected_size: int
    selected_features: tuple
    seed: int
    k: int

    @property
    def curve(self):
        return [(stage.size, stage.cv_rmse) for stage in self.stages]

    def to_dict(self):
        return {
            "k": self.k,
            "seed": self.seed,
            "curve": [[size, value] for size, value in self.curve],
            "selected_size": self.selected_size,
            "selected_features": list(self.selected_features),
            "stages": [
                {
                    "size": s.size,
                    "features": list(s.features),
                    "ranking": [[n, v] for n, v in s.ranking],
                    "cv_rmse": s.cv_rmse,
                }
                for s in self.stages
            ],
        }

    def save_curve(self, path):
        write_csv_atomic(path, ("size", "rmse"), self.curve)


def cv_rmse_for_subset(dataset, features, k, seed, forest_params=None):
    """k-fold CV RMSE of a forest on the named feature subset.

    Uses the same substreams as :func:`run_rfe`, so recomputing the RMSE
    of the selected subset reproduces the reported curve point exactly.
    """
    subset = dataset.select_features(features)
    plan = stratified_folds(subset.y, k, derive_seed(seed, "folds"))
    forest = RandomForestClassifier(
        seed=derive_seed(seed, "eval"), **(forest_params or {})
    )
    result = cross_validate(subset, forest, plan, name="forest")
    return rmse(result.pooled_predictions, subset.y)


def run_rfe(dataset, sizes, k=10, seed=0, forest_params=None):
    """Walk the elimination path over ``sizes`` and pick the best subset.

    ``sizes`` must be strictly decreasing subset sizes, each within
    [1, n_features]. At each size the surviving features are re-ranked on
    the full data and the weakest dropped to reach the next size.
    """
    p = dataset.n_features
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must not be empty")
    if any(b >= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be strictly decreasing, got {sizes}")
    if sizes[0] > p or sizes[-1] < 1:
        raise ValueError(
            f"sizes must lie within [1, {p}], got {sizes}"
        )
    params = forest_params or {}

    def rank_at(names):
        return rank_features(
            dataset.select_features(names),
            seed=derive_seed(seed, "rank", len(names)),
            **params,
        )

    def drop_to(names, ranking, size):
        survivors = {name for name, _ in ranking[:size]}
        return [name for name in names if name in survivors]

    current = list(dataset.schema.names)
    if sizes[0] < len(current):
        current = drop_to(current, rank_at(current), sizes[0])
    stages = []
    for index, size in enumerate(sizes):
        ranking = rank_at(current)
        score = cv_rmse_for_subset(dataset, current, k, seed, params)
        stages.append(
            RfeStage(
                size=size,
                features=tuple(current),
                ranking=tuple(ranking),
                cv_rmse=score,
            )
        )
        if index + 1 < len(sizes):
            current = drop_to(current, ranking, sizes[index + 1])

    best = stages[0]
    for stage in stages[1:]:
        if stage.cv_rmse <= best.cv_rmse:
            best = stage
    return RfeResult(
        stages=tuple(stages),
        selected_size=best.size,
        selected_features=best.features,
        seed=int(seed),
        k=int(k),
    )
