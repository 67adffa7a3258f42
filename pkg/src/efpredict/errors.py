"""Exception hierarchy shared by the pipeline.

The command-line layer maps these onto process exit codes: configuration
problems exit 1, data problems exit 2, training problems exit 3, and
verification failures exit 4.
"""


class EfPredictError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(EfPredictError):
    """Invalid configuration value or unusable combination of settings."""


class DataError(EfPredictError):
    """A dataset violates a structural or semantic requirement."""


class SchemaError(DataError):
    """Column set does not match the declared schema."""


class ParseError(DataError):
    """A cell could not be parsed as the declared column kind."""


class LabelError(DataError):
    """A target value is outside the ordinal label set {0, 1, 2}."""


class ImputationError(DataError):
    """A column has no observed values to impute from."""


class BalanceError(DataError):
    """Class balancing is impossible, e.g. an empty class."""


class ScalingError(DataError):
    """Standardization failed, e.g. a zero-variance continuous column."""


class FoldError(DataError):
    """A stratified fold plan cannot satisfy its guarantees."""


class EmissionError(DataError):
    """A report lacks the diagnostics needed to emit a figure."""


class TrainingError(EfPredictError):
    """Model training failed."""


class ConvergenceError(TrainingError):
    """An iterative optimizer exhausted its budget away from its target."""


class VerificationError(EfPredictError):
    """Recomputed metrics disagree with the published reference tables."""
