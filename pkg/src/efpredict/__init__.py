"""Ordinal ejection-fraction classification pipeline.

End-to-end tooling for three-class ordinal prediction on tabular
clinical features: preprocessing (imputation, class balancing, scaling,
stratified folds), five from-scratch classifiers behind a scikit-learn
style estimator API, forest-importance recursive feature elimination, a
cross-validation and metrics engine verified against published
reference tables, and seedable synthetic cohorts with planted signal.
"""

__version__ = "0.1.0"

from .cohort import (
    CohortConfig,
    GenerativeTruth,
    Marginal,
    default_config,
    generate_cohort,
    inject_missing,
)
from .crossval import CvResult, cross_validate, rank_models
from .dataset import Dataset, load_dataset, save_dataset
from .forest import RandomForestClassifier
from .metrics import (
    MetricsTable,
    confusion_matrix,
    display_percent,
    per_class_metrics,
    rmse,
)
from .model_io import load_model, save_model
from .neighbors import KnnClassifier
from .ordinal import OrdinalLogitClassifier, olr_negative_log_likelihood
from .pipeline import (
    MODEL_REGISTRY,
    PipelineConfig,
    RunReport,
    build_model,
    emit_figures,
    run_pipeline,
)
from .preprocess import (
    ColumnStandardizer,
    FoldPlan,
    MedianModeImputer,
    impute_missing,
    standardize,
    stratified_folds,
    upsample_balance,
)
from .reference_tables import (
    REFERENCE_MODELS,
    VerificationReport,
    verify_paper_tables,
)
from .rfe import RfeResult, cv_rmse_for_subset, rank_features, run_rfe
from .schema import (
    BUILTIN_SCHEMAS,
    CLASS_LABELS,
    CLASS_NAMES,
    Column,
    FeatureSchema,
    N_CLASSES,
    STEP1_SCHEMA,
    STEP2_SCHEMA,
    get_schema,
)
from .svm import RbfSvmClassifier, rbf_kernel
from .tree import CartTreeClassifier, gini_impurity

__all__ = [
    "BUILTIN_SCHEMAS",
    "CLASS_LABELS",
    "CLASS_NAMES",
    "CartTreeClassifier",
    "CohortConfig",
    "Column",
    "ColumnStandardizer",
    "CvResult",
    "Dataset",
    "FeatureSchema",
    "FoldPlan",
    "GenerativeTruth",
    "KnnClassifier",
    "MODEL_REGISTRY",
    "Marginal",
    "MedianModeImputer",
    "MetricsTable",
    "N_CLASSES",
    "OrdinalLogitClassifier",
    "PipelineConfig",
    "REFERENCE_MODELS",
    "RandomForestClassifier",
    "RbfSvmClassifier",
    "RfeResult",
    "RunReport",
    "STEP1_SCHEMA",
    "STEP2_SCHEMA",
    "VerificationReport",
    "build_model",
    "confusion_matrix",
    "cross_validate",
    "cv_rmse_for_subset",
    "default_config",
    "display_percent",
    "emit_figures",
    "generate_cohort",
    "get_schema",
    "gini_impurity",
    "impute_missing",
    "inject_missing",
    "load_dataset",
    "load_model",
    "olr_negative_log_likelihood",
    "per_class_metrics",
    "rank_features",
    "rank_models",
    "rbf_kernel",
    "rmse",
    "run_pipeline",
    "run_rfe",
    "save_dataset",
    "save_model",
    "standardize",
    "stratified_folds",
    "upsample_balance",
    "verify_paper_tables",
]
