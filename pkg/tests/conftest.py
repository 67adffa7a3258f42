import numpy as np
import pytest

from efpredict import (
    Dataset,
    STEP1_SCHEMA,
    default_config,
    generate_cohort,
    upsample_balance,
)
from efpredict.rng import derive_seed


def make_blobs(n_per_class, sd=0.5, seed=1, spread=4.0):
    """Three well-separated Gaussian blobs in the plane."""
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [spread, 0.0], [0.0, spread]])
    X = np.vstack(
        [c + sd * rng.standard_normal((n_per_class, 2)) for c in centers]
    )
    y = np.repeat([0, 1, 2], n_per_class)
    return X, y


def make_ordinal_line(n, seed=5, noise=0.5, cuts=(-0.8, 0.8)):
    """1-D latent signal cut into three ordered classes."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 2))
    latent = 2.0 * X[:, 0] + noise * rng.standard_normal(n)
    y = (latent > cuts[0]).astype(np.int64) + (latent > cuts[1]).astype(
        np.int64
    )
    return X, y


@pytest.fixture(scope="session")
def planted_cohort():
    config = default_config(n_patients=300, seed=0)
    return generate_cohort(config)


@pytest.fixture(scope="session")
def balanced_planted(planted_cohort):
    dataset, _ = planted_cohort
    return upsample_balance(dataset, derive_seed(0, "balance"))


@pytest.fixture
def tiny_dataset():
    """Six-row dataset on the first schema with two missing cells."""
    rng = np.random.default_rng(42)
    X = rng.uniform(1.0, 9.0, size=(6, STEP1_SCHEMA.width))
    for j in STEP1_SCHEMA.binary_indices:
        X[:, j] = rng.integers(0, 2, size=6)
    X[0, 0] = np.nan
    X[3, 2] = np.nan
    y = np.array([0, 1, 2, 0, 1, 2])
    return Dataset(schema=STEP1_SCHEMA, X=X, y=y)
