import numpy as np
import pytest

from efpredict.cohort import (
    CohortConfig,
    Marginal,
    default_config,
    generate_cohort,
    inject_missing,
)
from efpredict.errors import ConfigError
from efpredict.schema import STEP1_SCHEMA


def test_uniform_draws_in_range():
    rng = np.random.default_rng(0)
    values = Marginal("uniform", 2.0, 5.0).draw(rng, 500)
    assert values.min() >= 2.0
    assert values.max() <= 5.0
    assert 3.0 < values.mean() < 4.0


def test_lognormal_draws_in_range_and_skewed():
    rng = np.random.default_rng(1)
    values = Marginal("lognormal", 10.0, 1000.0).draw(rng, 2000)
    assert values.min() >= 10.0
    assert values.max() <= 1000.0
    assert np.median(values) < values.mean()


def test_bernoulli_draws():
    rng = np.random.default_rng(2)
    values = Marginal("bernoulli", p=0.7).draw(rng, 2000)
    assert set(np.unique(values)) <= {0.0, 1.0}
    assert 0.65 < values.mean() < 0.75


def test_marginal_validation():
    with pytest.raises(ConfigError):
        Marginal("triangular")
    with pytest.raises(ConfigError):
        Marginal("uniform", 5.0, 5.0)
    with pytest.raises(ConfigError):
        Marginal("lognormal", 0.0, 10.0)
    with pytest.raises(ConfigError):
        Marginal("bernoulli", p=1.5)


def test_marginal_round_trip():
    for marginal in (
        Marginal("uniform", 1.0, 2.0),
        Marginal("lognormal", 5.0, 50.0),
        Marginal("bernoulli", p=0.25),
    ):
        assert Marginal.from_dict(marginal.to_dict()) == marginal


def test_config_validation():
    base = default_config()
    with pytest.raises(ConfigError, match="n_patients"):
        default_config(n_patients=5)
    missing = dict(base.marginals)
    del missing["Age"]
    with pytest.raises(ConfigError, match="'Age'"):
        default_config(marginals=missing)
    extra = dict(base.marginals)
    extra["Bogus"] = Marginal("uniform", 0.0, 1.0)
    with pytest.raises(ConfigError, match="'Bogus'"):
        default_config(marginals=extra)
    with pytest.raises(ConfigError, match="'Nope'"):
        default_config(effect_weights={"Nope": 1.0})
    with pytest.raises(ConfigError, match="ordered"):
        default_config(threshold_low=2.0, threshold_high=-2.0)
    with pytest.raises(ConfigError, match="noise_sd"):
        default_config(noise_sd=-0.1)
    with pytest.raises(ConfigError, match="missing_rate"):
        default_config(missing_rate=1.0)
    with pytest.raises(ConfigError, match="seed"):
        default_config(seed=-3)
    with pytest.raises(ConfigError):
        default_config(schema_name="step3")


def test_config_round_trip_and_load(tmp_path):
    config = default_config(n_patients=40, seed=9, missing_rate=0.1)
    again = CohortConfig.from_dict(config.to_dict())
    assert again == config
    path = tmp_path / "config.json"
    from efpredict.serialize import write_json_atomic

    write_json_atomic(path, config.to_dict())
    assert CohortConfig.load(path) == config


def test_informative_property():
    config = default_config()
    assert config.informative == ("CPK-MB", "PR")
    none = default_config(effect_weights={})
    assert none.informative == ()
    zero = default_config(effect_weights={"PR": 0.0, "Age": 2.0})
    assert zero.informative == ("Age",)


def test_generate_deterministic_and_seed_sensitive():
    config = default_config(n_patients=50)
    a, truth_a = generate_cohort(config)
    b, truth_b = generate_cohort(config)
    c, _ = generate_cohort(default_config(n_patients=50, seed=1))
    assert np.array_equal(a.X, b.X)
    assert np.array_equal(a.y, b.y)
    assert truth_a.to_dict() == truth_b.to_dict()
    assert not np.array_equal(a.X, c.X)


def test_generate_shapes_and_ranges():
    config = default_config(n_patients=60)
    dataset, truth = generate_cohort(config)
    assert dataset.n_rows == 60
    assert dataset.n_features == STEP1_SCHEMA.width
    assert set(np.unique(dataset.y)) <= {0, 1, 2}
    for j in STEP1_SCHEMA.binary_indices:
        assert set(np.unique(dataset.X[:, j])) <= {0.0, 1.0}
    age = dataset.X[:, STEP1_SCHEMA.index_of("Age")]
    assert age.min() >= 30.0
    assert age.max() <= 90.0
    assert truth.class_counts == tuple(np.bincount(dataset.y, minlength=3))
    assert truth.informative == ("CPK-MB", "PR")


def test_labels_follow_documented_latent_formula():
    """Replay the documented sampling order and reproduce the labels."""
    config = default_config(n_patients=80, seed=4)
    dataset, _ = generate_cohort(config)
    schema = config.schema
    rng = np.random.default_rng(4)
    X = np.empty((80, schema.width))
    for j, name in enumerate(schema.names):
        X[:, j] = config.marginals[name].draw(rng, 80)
    assert np.array_equal(X, dataset.X)
    latent = rng.standard_normal(80) * config.noise_sd
    for j, name in enumerate(schema.names):
        weight = config.effect_weights.get(name, 0.0)
        if weight:
            column = X[:, j]
            latent += (
                weight
                * (column - column.mean())
                / column.std(ddof=1)
            )
    expected = (latent >= config.threshold_low).astype(int) + (
        latent >= config.threshold_high
    ).astype(int)
    assert np.array_equal(dataset.y, expected)


def test_truth_records_feature_statistics():
    config = default_config(n_patients=40, seed=2)
    dataset, truth = generate_cohort(config)
    for j, name in enumerate(config.schema.names):
        assert truth.feature_means[name] == pytest.approx(
            float(dataset.X[:, j].mean())
        )
        assert truth.feature_sds[name] == pytest.approx(
            float(dataset.X[:, j].std(ddof=1))
        )
    assert truth.thresholds == (-0.42, 1.01)
    assert truth.weights["CPK-MB"] == 1.0
    assert truth.weights["Age"] == 0.0


def test_degenerate_thresholds_give_single_class():
    inf = float("inf")
    low_all = default_config(
        n_patients=20, threshold_low=-inf, threshold_high=-inf
    )
    assert set(generate_cohort(low_all)[0].y) == {2}
    high_all = default_config(
        n_patients=20, threshold_low=inf, threshold_high=inf
    )
    assert set(generate_cohort(high_all)[0].y) == {0}
    middle = default_config(
        n_patients=20, threshold_low=-inf, threshold_high=inf
    )
    assert set(generate_cohort(middle)[0].y) == {1}


def test_default_split_has_all_classes(planted_cohort):
    dataset, truth = planted_cohort
    counts = dataset.class_counts()
    assert counts.sum() == 300
    assert counts.min() >= 30
    assert truth.class_counts == tuple(counts)


def test_missing_rate_injects_holes():
    config = default_config(n_patients=100, missing_rate=0.2, seed=6)
    dataset, _ = generate_cohort(config)
    share = dataset.missing_mask.mean()
    assert 0.12 < share < 0.28
    assert set(np.unique(dataset.y)) <= {0, 1, 2}
    again, _ = generate_cohort(config)
    assert np.array_equal(dataset.missing_mask, again.missing_mask)


def test_inject_missing_direct():
    rng = np.random.default_rng(8)
    config = default_config(n_patients=50)
    dataset, _ = generate_cohort(config)
    holed = inject_missing(dataset, 0.3, seed=1)
    assert 0.2 < holed.missing_mask.mean() < 0.4
    assert np.array_equal(holed.y, dataset.y)
    kept = ~holed.missing_mask
    assert np.array_equal(holed.X[kept], dataset.X[kept])
    with pytest.raises(ValueError):
        inject_missing(dataset, 1.0, seed=1)


def test_step2_default_config():
    config = default_config(schema_name="step2", n_patients=30)
    dataset, truth = generate_cohort(config)
    assert dataset.n_features == 6
    assert truth.informative == ("TimeX12", "FmcOnset")
