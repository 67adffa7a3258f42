"""Stratified k-fold cross-validation and model ranking."""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from .errors import TrainingError
from .metrics import confusion_matrix
from .preprocess import ColumnStandardizer


@dataclass(frozen=True)
class CvResult:
    """Outcome of one model's k-fold run.

    ``pooled_predictions`` holds the held-out prediction for every row,
    so the pooled confusion matrix covers each row exactly once.
    """

    model: str
    k: int
    fold_accuracies: np.ndarray
    pooled_predictions: np.ndarray
    pooled_confusion: np.ndarray
    mean_accuracy: float = field(default=None)

    def __post_init__(self):
        if self.mean_accuracy is None:
            object.__setattr__(
                self,
                "mean_accuracy",
                float(np.mean(self.fold_accuracies)),
            )


def cross_validate(dataset, estimator, plan, name=None):
    """Evaluate ``estimator`` on every fold of ``plan``.

    Each fold standardizes the continuous columns on its training split
    only, fits a fresh clone, and predicts the held-out rows. Any fold
    failure is reported as a training error naming the fold.
    """
    if plan.n_rows != dataset.n_rows:
        raise ValueError(
            f"fold plan covers {plan.n_rows} rows, dataset has "
            f"{dataset.n_rows}"
        )
    name = name or type(estimator).__name__
    X, y = dataset.X, dataset.y
    continuous = dataset.schema.continuous_indices
    pooled = np.empty(dataset.n_rows, dtype=np.int64)
    accuracies = np.empty(plan.k, dtype=np.float64)
    for fold, train_rows, test_rows in plan.iter_splits():
        try:
            scaler = ColumnStandardizer(columns=continuous)
            X_train = scaler.fit(X[train_rows]).transform(X[train_rows])
            X_test = scaler.transform(X[test_rows])
            model = clone(estimator)
            model.fit(X_train, y[train_rows])
            predictions = model.predict(X_test)
        except Exception as exc:
            raise TrainingError(f"model {name}, fold {fold}: {exc}") from exc
        pooled[test_rows] = predictions
        accuracies[fold] = float(np.mean(predictions == y[test_rows]))
    return CvResult(
        model=name,
        k=plan.k,
        fold_accuracies=accuracies,
        pooled_predictions=pooled,
        pooled_confusion=confusion_matrix(y, pooled),
    )


def rank_models(results):
    """Order CV results best first.

    Sorts by mean accuracy, then macro F on the pooled confusion matrix,
    then model name; an undefined macro F ranks below any defined one.
    """
    from .metrics import per_class_metrics

    names = [r.model for r in results]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate model names in ranking: {sorted(names)}")

    def key(result):
        macro_f = per_class_metrics(result.pooled_confusion).macro_f
        if np.isnan(macro_f):
            macro_f = -1.0
        return (-result.mean_accuracy, -macro_f, result.model)

    return sorted(results, key=key)
