"""Seedable synthetic patient cohorts with planted class signal.

Features are drawn independently from configured marginals, then a
latent severity score mixes the standardized informative features with
Gaussian noise. Two ordered thresholds cut the score into the three
ordinal classes, so a cohort's difficulty and class balance are fully
controlled by its weights, noise level, and thresholds. The generating
truth is recorded alongside every cohort.
"""

import math

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError
from .schema import BUILTIN_SCHEMAS, get_schema
from .serialize import read_json, write_json_atomic

UNIFORM = "uniform"
LOGNORMAL = "lognormal"
BERNOULLI = "bernoulli"
_SHAPES = (UNIFORM, LOGNORMAL, BERNOULLI)


@dataclass(frozen=True)
class Marginal:
    """Sampling recipe for one feature column.

    ``uniform`` and ``lognormal`` draw from [low, high]; the lognormal
    places the range at three log-scale standard deviations and clips.
    ``bernoulli`` draws 1 with probability ``p``.
    """

    shape: str
    low: float = 0.0
    high: float = 1.0
    p: float = 0.5

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise ConfigError(f"unknown marginal shape {self.shape!r}")
        if self.shape in (UNIFORM, LOGNORMAL):
            if not self.low < self.high:
                raise ConfigError(
                    f"marginal range [{self.low}, {self.high}] is empty"
                )
            if self.shape == LOGNORMAL and self.low <= 0:
                raise ConfigError("lognormal range must be positive")
        if self.shape == BERNOULLI and not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"bernoulli p must lie in [0, 1], got {self.p}")

    def draw(self, rng, n):
        if self.shape == UNIFORM:
            return rng.uniform(self.low, self.high, n)
        if self.shape == BERNOULLI:
            return (rng.random(n) < self.p).astype(np.float64)
        mid = 0.5 * (math.log(self.low) + math.log(self.high))
        spread = (math.log(self.high) - math.log(self.low)) / 6.0
        values = np.exp(mid + spread * rng.standard_normal(n))
        return np.clip(values, self.low, self.high)

    def to_dict(self):
        data = {"shape": self.shape}
        if self.shape == BERNOULLI:
            data["p"] = self.p
        else:
            data["low"] = self.low
            data["high"] = self.high
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True)
class CohortConfig:
    """Complete recipe for one synthetic cohort."""

    schema_name: str
    n_patients: int
    marginals: dict
    effect_weights: dict
    threshold_low: float
    threshold_high: float
    noise_sd: float
    seed: int = 0
    missing_rate: float = 0.0

    def __post_init__(self):
        schema = get_schema(self.schema_name)
        if self.n_patients < 9:
            raise ConfigError(
                f"n_patients must be at least 9, got {self.n_patients}"
            )
        names = set(schema.names)
        have = set(self.marginals)
        for name in sorted(names - have):
            raise ConfigError(f"no marginal configured for column {name!r}")
        for name in sorted(have - names):
            raise ConfigError(f"marginal for unknown column {name!r}")
        for name in sorted(set(self.effect_weights) - names):
            raise ConfigError(f"effect weight for unknown column {name!r}")
        if not self.threshold_low <= self.threshold_high:
            raise ConfigError(
                f"thresholds must be ordered, got {self.threshold_low} > "
                f"{self.threshold_high}"
            )
        if not self.noise_sd >= 0:
            raise ConfigError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if self.missing_rate < 0 or self.missing_rate >= 1:
            raise ConfigError(
                f"missing_rate must lie in [0, 1), got {self.missing_rate}"
            )
        if int(self.seed) < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

    @property
    def schema(self):
        return get_schema(self.schema_name)

    @property
    def informative(self):
        return tuple(
            name
            for name in self.schema.names
            if self.effect_weights.get(name, 0.0) != 0.0
        )

    def to_dict(self):
        return {
            "schema_name": self.schema_name,
            "n_patients": self.n_patients,
            "marginals": {
                name: self.marginals[name].to_dict()
                for name in self.schema.names
            },
            "effect_weights": dict(self.effect_weights),
            "threshold_low": self.threshold_low,
            "threshold_high": self.threshold_high,
            "noise_sd": self.noise_sd,
            "seed": self.seed,
            "missing_rate": self.missing_rate,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            marginals = {
                name: Marginal.from_dict(m)
                for name, m in data["marginals"].items()
            }
            return cls(
                schema_name=data["schema_name"],
                n_patients=int(data["n_patients"]),
                marginals=marginals,
                effect_weights={
                    k: float(v)
                    for k, v in data.get("effect_weights", {}).items()
                },
                threshold_low=float(data["threshold_low"]),
                threshold_high=float(data["threshold_high"]),
                noise_sd=float(data["noise_sd"]),
                seed=int(data.get("seed", 0)),
                missing_rate=float(data.get("missing_rate", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed cohort config: {exc}") from exc

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


@dataclass(frozen=True)
class GenerativeTruth:
    """The parameters that generated a cohort, for later inspection."""

    schema_name: str
    n_patients: int
    seed: int
    weights: dict
    informative: tuple
    thresholds: tuple
    noise_sd: float
    feature_means: dict
    feature_sds: dict
    class_counts: tuple

    def to_dict(self):
        return {
            "schema_name": self.schema_name,
            "n_patients": self.n_patients,
            "seed": self.seed,
            "weights": dict(self.weights),
            "informative": list(self.informative),
            "thresholds": list(self.thresholds),
            "noise_sd": self.noise_sd,
            "feature_means": dict(self.feature_means),
            "feature_sds": dict(self.feature_sds),
            "class_counts": list(self.class_counts),
        }

    def save(self, path):
        write_json_atomic(path, self.to_dict())


def generate_cohort(config):
    """Draw a cohort per ``config``; returns (dataset, truth).

    The same config always produces the same rows. Thresholds of -inf or
    +inf push every patient to one side, so degenerate single-class
    cohorts are expressible.
    """
    schema = config.schema
    rng = np.random.default_rng(config.seed)
    n = config.n_patients
    X = np.empty((n, schema.width), dtype=np.float64)
    for j, name in enumerate(schema.names):
        X[:, j] = config.marginals[name].draw(rng, n)

    latent = rng.standard_normal(n) * config.noise_sd
    means = {}
    sds = {}
    for j, name in enumerate(schema.names):
        mean = float(np.mean(X[:, j]))
        sd = float(np.std(X[:, j], ddof=1))
        means[name] = mean
        sds[name] = sd
        weight = config.effect_weights.get(name, 0.0)
        if weight != 0.0 and sd > 0.0:
            latent += weight * (X[:, j] - mean) / sd

    y = (
        (latent >= config.threshold_low).astype(np.int64)
        + (latent >= config.threshold_high).astype(np.int64)
    )
    dataset = Dataset(schema=schema, X=X, y=y)
    if config.missing_rate > 0.0:
        dataset = inject_missing(
            dataset, config.missing_rate, seed=rng.integers(2**63)
        )
    truth = GenerativeTruth(
        schema_name=config.schema_name,
        n_patients=n,
        seed=int(config.seed),
        weights={
            name: float(config.effect_weights.get(name, 0.0))
            for name in schema.names
        },
        informative=config.informative,
        thresholds=(float(config.threshold_low), float(config.threshold_high)),
        noise_sd=float(config.noise_sd),
        feature_means=means,
        feature_sds=sds,
        class_counts=tuple(int(c) for c in np.bincount(y, minlength=3)),
    )
    return dataset, truth


def inject_missing(dataset, rate, seed):
    """Blank a random ``rate`` share of feature cells; labels survive."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"rate must lie in [0, 1), got {rate}")
    rng = np.random.default_rng(seed)
    holes = rng.random(dataset.X.shape) < rate
    X = dataset.X.copy()
    X[holes] = np.nan
    return dataset.replace(X=X)


_STEP1_MARGINALS = {
    "Age": Marginal(UNIFORM, 30.0, 90.0),
    "LAD": Marginal(BERNOULLI, p=0.5),
    "W.B.C": Marginal(LOGNORMAL, 4000.0, 20000.0),
    "R.B.C": Marginal(UNIFORM, 3.5, 6.5),
    "B.U.N": Marginal(LOGNORMAL, 7.0, 60.0),
    "HB": Marginal(UNIFORM, 9.0, 18.0),
    "CPK": Marginal(LOGNORMAL, 30.0, 3000.0),
    "CPK-MB": Marginal(LOGNORMAL, 5.0, 500.0),
    "PR": Marginal(UNIFORM, 50.0, 130.0),
    "BS": Marginal(LOGNORMAL, 70.0, 400.0),
    "TimeX12": Marginal(UNIFORM, 0.0, 24.0),
    "TimeX1234": Marginal(UNIFORM, 0.0, 48.0),
    "TimeX23": Marginal(UNIFORM, 0.0, 24.0),
    "HeartNormSound": Marginal(BERNOULLI, p=0.7),
}

_STEP2_MARGINALS = {
    "TimeX12": Marginal(UNIFORM, 0.0, 24.0),
    "TimeX1234": Marginal(UNIFORM, 0.0, 48.0),
    "TimeX23": Marginal(UNIFORM, 0.0, 24.0),
    "TimeX123": Marginal(UNIFORM, 0.0, 36.0),
    "HeartNormSound": Marginal(BERNOULLI, p=0.7),
    "FmcOnset": Marginal(LOGNORMAL, 0.25, 24.0),
}

_DEFAULT_WEIGHTS = {
    "step1": {"CPK-MB": 1.0, "PR": 1.0},
    "step2": {"TimeX12": 1.0, "FmcOnset": 1.0},
}

_DEFAULT_MARGINALS = {"step1": _STEP1_MARGINALS, "step2": _STEP2_MARGINALS}

DEFAULT_THRESHOLD_LOW = -0.42
DEFAULT_THRESHOLD_HIGH = 1.01
DEFAULT_NOISE_SD = 0.6


def default_config(schema_name="step1", n_patients=300, seed=0, **overrides):
    """Planted-signal cohort recipe: two informative features, the rest
    noise, thresholds near a 40/35/25 class split."""
    if schema_name not in BUILTIN_SCHEMAS:
        raise ConfigError(
            f"default cohort configs exist only for "
            f"{sorted(BUILTIN_SCHEMAS)}, got {schema_name!r}"
        )
    settings = {
        "schema_name": schema_name,
        "n_patients": n_patients,
        "marginals": dict(_DEFAULT_MARGINALS[schema_name]),
        "effect_weights": dict(_DEFAULT_WEIGHTS[schema_name]),
        "threshold_low": DEFAULT_THRESHOLD_LOW,
        "threshold_high": DEFAULT_THRESHOLD_HIGH,
        "noise_sd": DEFAULT_NOISE_SD,
        "seed": seed,
    }
    settings.update(overrides)
    return CohortConfig(**settings)
