"""End-to-end pipeline: ingest, preprocess, evaluate, report.

A run loads a dataset, imputes and balances it, optionally narrows it by
recursive feature elimination, cross-validates every configured model on
one shared fold plan, ranks the models, and fits a diagnostic forest for
the out-of-bag, node-count, and importance figures. Everything derives
from one seed through named substreams, so a config reproduces its
report byte for byte.
"""

import hashlib
import os

from dataclasses import dataclass, field

from . import __version__
from .crossval import cross_validate, rank_models
from .dataset import load_dataset
from .errors import ConfigError, EfPredictError, EmissionError, ParseError
from .forest import RandomForestClassifier
from .metrics import display_percent, per_class_metrics
from .neighbors import KnnClassifier
from .ordinal import OrdinalLogitClassifier
from .preprocess import impute_missing, stratified_folds, upsample_balance
from .rfe import run_rfe
from .rng import derive_seed
from .schema import get_schema
from .serialize import read_json, to_json, write_csv_atomic, write_json_atomic
from .svm import RbfSvmClassifier
from .tree import CartTreeClassifier

REPORT_FORMAT = "efpredict-report"
REPORT_VERSION = 1

_FOREST_PARAM_KEYS = ("n_trees", "mtry", "min_leaf", "max_depth")


def _build_tree(params, seed, n_jobs):
    return CartTreeClassifier(**params)


def _build_forest(params, seed, n_jobs):
    return RandomForestClassifier(seed=seed, n_jobs=n_jobs, **params)


def _build_knn(params, seed, n_jobs):
    return KnnClassifier(**params)


def _build_ordinal(params, seed, n_jobs):
    return OrdinalLogitClassifier(**params)


def _build_svm(params, seed, n_jobs):
    return RbfSvmClassifier(**params)


MODEL_REGISTRY = {
    "tree": _build_tree,
    "forest": _build_forest,
    "knn": _build_knn,
    "ordinal_logit": _build_ordinal,
    "svm": _build_svm,
}


@dataclass(frozen=True)
class PipelineConfig:
    """Settings for one pipeline run."""

    dataset_path: str
    schema: str = "step1"
    seed: int = 0
    k: int = 10
    models: tuple = tuple(sorted(MODEL_REGISTRY))
    model_params: dict = field(default_factory=dict)
    rfe_sizes: tuple = None
    out_dir: str = "out"
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        if self.rfe_sizes is not None:
            object.__setattr__(
                self, "rfe_sizes", tuple(int(s) for s in self.rfe_sizes)
            )
        if not self.dataset_path:
            raise ConfigError("dataset_path is required")
        if self.k < 2:
            raise ConfigError(f"k must be at least 2, got {self.k}")
        if int(self.seed) < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if not self.models:
            raise ConfigError("at least one model must be enabled")
        unknown = [m for m in self.models if m not in MODEL_REGISTRY]
        if unknown:
            raise ConfigError(
                f"unknown models {unknown}; known: {sorted(MODEL_REGISTRY)}"
            )
        if len(set(self.models)) != len(self.models):
            raise ConfigError(f"duplicate model names in {list(self.models)}")
        for name in self.model_params:
            if name not in MODEL_REGISTRY:
                raise ConfigError(f"model_params for unknown model {name!r}")
        if self.n_jobs == 0:
            raise ConfigError("n_jobs must be a nonzero worker count")

    def to_dict(self):
        return {
            "dataset_path": self.dataset_path,
            "schema": self.schema,
            "seed": int(self.seed),
            "k": int(self.k),
            "models": list(self.models),
            "model_params": {
                name: dict(params)
                for name, params in sorted(self.model_params.items())
            },
            "rfe_sizes": (
                None if self.rfe_sizes is None else list(self.rfe_sizes)
            ),
            "out_dir": self.out_dir,
            "n_jobs": int(self.n_jobs),
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        known = {
            "dataset_path", "schema", "seed", "k", "models", "model_params",
            "rfe_sizes", "out_dir", "n_jobs",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "models" in kwargs and kwargs["models"] is not None:
            kwargs["models"] = tuple(kwargs["models"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path):
        try:
            return cls.from_dict(read_json(path))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def digest(self):
        """Fingerprint of the result-determining settings.

        Execution details (worker count, output directory) are excluded,
        so reports from the same modeling config are byte-identical
        regardless of where or how parallel they ran.
        """
        determining = self.to_dict()
        determining.pop("out_dir")
        determining.pop("n_jobs")
        return hashlib.sha256(to_json(determining).encode()).hexdigest()


@dataclass(frozen=True)
class RunReport:
    """Everything a pipeline run produced, serializable losslessly."""

    provenance: dict
    preprocess: dict
    folds: dict
    models: dict
    ranking: tuple
    rfe: dict = None
    forest_diagnostics: dict = None

    def to_dict(self):
        return {
            "format": REPORT_FORMAT,
            "format_version": REPORT_VERSION,
            "provenance": self.provenance,
            "preprocess": self.preprocess,
            "folds": self.folds,
            "models": self.models,
            "ranking": list(self.ranking),
            "rfe": self.rfe,
            "forest_diagnostics": self.forest_diagnostics,
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or data.get("format") != REPORT_FORMAT:
            raise ParseError("not a pipeline report document")
        if data.get("format_version") != REPORT_VERSION:
            raise ParseError(
                f"unsupported report version {data.get('format_version')!r}"
            )
        return cls(
            provenance=data["provenance"],
            preprocess=data["preprocess"],
            folds=data["folds"],
            models=data["models"],
            ranking=tuple(data["ranking"]),
            rfe=data.get("rfe"),
            forest_diagnostics=data.get("forest_diagnostics"),
        )

    def save(self, path):
        write_json_atomic(path, self.to_dict())

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))

    def summary_lines(self):
        pre = self.preprocess
        lines = [
            f"dataset: {pre['n_rows_input']} rows, schema "
            f"{self.provenance['schema']}, class counts "
            f"{pre['class_counts_input']}",
            f"imputed {pre['imputed_cells']} missing cells",
            f"balanced to {pre['n_rows_balanced']} rows, class counts "
            f"{pre['class_counts_balanced']}",
        ]
        if self.rfe is not None:
            lines.append(
                f"rfe: selected {self.rfe['selected_size']} features "
                f"{self.rfe['selected_features']}"
            )
        lines.append(
            f"cross-validation: k={self.folds['k']}, fold sizes "
            f"{self.folds['fold_sizes']}"
        )
        for name in self.models:
            entry = self.models[name]
            lines.append(
                f"model {name}: mean accuracy {entry['mean_accuracy']:.4f}"
            )
        lines.append("ranking: " + " > ".join(self.ranking))
        return lines


def _stage(name, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except (EfPredictError, ValueError) as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


def build_model(name, config):
    """Instantiate a registry model with the config's hyperparameters."""
    if name not in MODEL_REGISTRY:
        raise ConfigError(f"unknown model {name!r}")
    params = dict(config.model_params.get(name, {}))
    seed = derive_seed(config.seed, "model", name)
    try:
        return MODEL_REGISTRY[name](params, seed, config.n_jobs)
    except TypeError as exc:
        raise ConfigError(f"bad hyperparameters for {name}: {exc}") from exc


def run_pipeline(config, dataset=None):
    """Execute the full pipeline and return the :class:`RunReport`.

    ``dataset`` may inject an already-loaded dataset (the CLI loads from
    ``config.dataset_path``). The report is not written here; callers
    decide where it goes.
    """
    schema = _stage("load", get_schema, config.schema)
    if dataset is None:
        dataset = _stage("load", load_dataset, config.dataset_path, schema)

    input_counts = dataset.class_counts()
    imputed_cells = int(dataset.missing_mask.sum())
    imputed, _ = _stage("impute", impute_missing, dataset)
    balanced = _stage(
        "balance", upsample_balance, imputed, derive_seed(config.seed, "balance")
    )

    rfe_dict = None
    modeling = balanced
    if config.rfe_sizes is not None:
        forest_params = {
            key: value
            for key, value in config.model_params.get("forest", {}).items()
            if key in _FOREST_PARAM_KEYS
        }
        rfe_result = _stage(
            "rfe",
            run_rfe,
            balanced,
            config.rfe_sizes,
            k=config.k,
            seed=derive_seed(config.seed, "rfe"),
            forest_params=forest_params,
        )
        rfe_dict = rfe_result.to_dict()
        modeling = balanced.select_features(rfe_result.selected_features)

    plan = _stage(
        "folds",
        stratified_folds,
        modeling.y,
        config.k,
        derive_seed(config.seed, "folds"),
    )

    model_entries = {}
    results = []
    for name in sorted(config.models):
        estimator = _stage("models", build_model, name, config)
        result = _stage(
            "models", cross_validate, modeling, estimator, plan, name
        )
        results.append(result)
        table = per_class_metrics(result.pooled_confusion)
        model_entries[name] = {
            "fold_accuracies": [float(a) for a in result.fold_accuracies],
            "mean_accuracy": float(result.mean_accuracy),
            "confusion": [
                [int(v) for v in row] for row in result.pooled_confusion
            ],
            "metrics": table.to_dict(),
            "display_percent": {
                "precision": [display_percent(v) for v in table.precision],
                "recall": [display_percent(v) for v in table.recall],
                "f_score": [display_percent(v) for v in table.f_score],
                "g_score": [display_percent(v) for v in table.g_score],
                "accuracy": display_percent(table.accuracy),
            },
        }
    ranking = tuple(r.model for r in _stage("rank", rank_models, results))

    diagnostics = None
    if "forest" in config.models:
        params = {
            key: value
            for key, value in config.model_params.get("forest", {}).items()
            if key in _FOREST_PARAM_KEYS
        }
        forest = RandomForestClassifier(
            seed=derive_seed(config.seed, "diagnostics"),
            n_jobs=config.n_jobs,
            **params,
        )
        _stage("diagnostics", forest.fit, modeling.X, modeling.y)
        importances = {
            name: float(v)
            for name, v in zip(
                modeling.schema.names, forest.gini_importances_
            )
        }
        diagnostics = {
            "oob_error_curve": [float(v) for v in forest.oob_error_curve_],
            "oob_error": float(forest.oob_error_),
            "node_histogram": [int(v) for v in forest.node_histogram_],
            "gini_importances": importances,
            "n_trees": int(forest.n_trees),
            "features": list(modeling.schema.names),
        }

    report = RunReport(
        provenance={
            "package_version": __version__,
            "schema": config.schema,
            "seed": int(config.seed),
            "dataset_path": str(config.dataset_path),
            "config_digest": config.digest(),
        },
        preprocess={
            "n_rows_input": int(dataset.n_rows),
            "class_counts_input": [int(c) for c in input_counts],
            "imputed_cells": imputed_cells,
            "n_rows_balanced": int(balanced.n_rows),
            "class_counts_balanced": [int(c) for c in balanced.class_counts()],
        },
        folds={
            "k": int(plan.k),
            "fold_sizes": [int(s) for s in plan.fold_sizes()],
        },
        models=model_entries,
        ranking=ranking,
        rfe=rfe_dict,
        forest_diagnostics=diagnostics,
    )
    return report


FIGURES = ("oob_error", "node_histogram", "importance", "rmse_curve")


def emit_figures(report, out_dir, figures=None):
    """Write figure data tables from a report; returns written paths.

    With ``figures=None`` every figure whose data exists is written.
    Naming a figure whose data is missing raises an emission error.
    """
    requested = FIGURES if figures is None else tuple(figures)
    unknown = [f for f in requested if f not in FIGURES]
    if unknown:
        raise EmissionError(f"unknown figures {unknown}; known {FIGURES}")
    explicit = figures is not None
    written = []

    diag = report.forest_diagnostics

    def need(figure, available):
        if not available:
            if explicit:
                raise EmissionError(
                    f"report lacks the data for figure {figure!r}"
                )
            return False
        return True

    if "oob_error" in requested and need("oob_error", diag is not None):
        path = os.path.join(out_dir, "oob_error.csv")
        rows = [
            (t + 1, err) for t, err in enumerate(diag["oob_error_curve"])
        ]
        write_csv_atomic(path, ("tree_count", "error"), rows)
        written.append(path)
    if "node_histogram" in requested and need(
        "node_histogram", diag is not None
    ):
        path = os.path.join(out_dir, "node_histogram.csv")
        rows = list(enumerate(diag["node_histogram"]))
        write_csv_atomic(path, ("tree_index", "node_count"), rows)
        written.append(path)
    if "importance" in requested and need("importance", diag is not None):
        path = os.path.join(out_dir, "importance.csv")
        ranked = sorted(
            diag["gini_importances"].items(),
            key=lambda pair: (-pair[1], pair[0]),
        )
        write_csv_atomic(path, ("feature", "importance"), ranked)
        written.append(path)
    if "rmse_curve" in requested and need(
        "rmse_curve", report.rfe is not None
    ):
        path = os.path.join(out_dir, "rmse_curve.csv")
        rows = [(int(s), float(v)) for s, v in report.rfe["curve"]]
        write_csv_atomic(path, ("size", "rmse"), rows)
        written.append(path)
    return written
