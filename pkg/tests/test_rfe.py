import numpy as np
import pytest

from efpredict.dataset import Dataset
from efpredict.rfe import (
    RfeResult,
    RfeStage,
    cv_rmse_for_subset,
    rank_features,
    run_rfe,
)
from efpredict.schema import Column, FeatureSchema


def build_dataset(names, X, y):
    schema = FeatureSchema(
        columns=tuple(Column(n, "continuous") for n in names), target="EF"
    )
    return Dataset(schema=schema, X=X, y=y)


def signal_noise_dataset(n=60, seed=71, n_noise=2):
    """Two separating coordinates plus pure-noise columns."""
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]])
    per = n // 3
    signal = np.vstack(
        [c + 0.4 * rng.standard_normal((per, 2)) for c in centers]
    )
    noise = rng.standard_normal((3 * per, n_noise))
    names = ["SigA", "SigB"] + [f"Noise{i}" for i in range(n_noise)]
    y = np.repeat([0, 1, 2], per)
    return build_dataset(names, np.hstack([signal, noise]), y)


FAST = {"n_trees": 25}


def test_rank_features_covers_all_and_finds_signal():
    ds = signal_noise_dataset()
    ranking = rank_features(ds, n_trees=40, seed=1)
    assert sorted(name for name, _ in ranking) == sorted(ds.schema.names)
    scores = [score for _, score in ranking]
    assert scores == sorted(scores, reverse=True)
    assert {ranking[0][0], ranking[1][0]} == {"SigA", "SigB"}


def test_rank_features_tie_breaks_by_name():
    rng = np.random.default_rng(73)
    signal = rng.normal(size=(45, 1))
    constant = np.zeros((45, 2))
    y = np.digitize(signal[:, 0], [-0.4, 0.4])
    ds = build_dataset(
        ["Zsig", "Bflat", "Aflat"], np.hstack([signal, constant]), y
    )
    ranking = rank_features(ds, n_trees=10, seed=0)
    assert ranking[0][0] == "Zsig"
    assert ranking[1] == ("Aflat", 0.0)
    assert ranking[2] == ("Bflat", 0.0)


def test_run_rfe_path_structure():
    ds = signal_noise_dataset()
    result = run_rfe(ds, sizes=[4, 3, 2], k=3, seed=0, forest_params=FAST)
    assert [s.size for s in result.stages] == [4, 3, 2]
    for stage in result.stages:
        assert len(stage.features) == stage.size
        assert sorted(n for n, _ in stage.ranking) == sorted(stage.features)
    for earlier, later in zip(result.stages, result.stages[1:]):
        assert set(later.features) <= set(earlier.features)
    assert result.selected_size in (4, 3, 2)
    assert len(result.selected_features) == result.selected_size


def test_run_rfe_keeps_signal_features():
    ds = signal_noise_dataset()
    result = run_rfe(ds, sizes=[4, 2], k=3, seed=0, forest_params=FAST)
    assert set(result.stages[-1].features) == {"SigA", "SigB"}


def test_run_rfe_tie_prefers_smaller_size():
    ds = signal_noise_dataset(n=45, seed=79)
    result = run_rfe(ds, sizes=[4, 3, 2], k=3, seed=0, forest_params=FAST)
    scores = [stage.cv_rmse for stage in result.stages]
    assert scores[2] == min(scores)
    assert result.selected_size == 2


def test_selected_score_reproducible():
    ds = signal_noise_dataset(n=60, seed=83)
    result = run_rfe(ds, sizes=[4, 2], k=3, seed=5, forest_params=FAST)
    by_size = {s.size: s for s in result.stages}
    selected = by_size[result.selected_size]
    again = cv_rmse_for_subset(
        ds, selected.features, k=3, seed=5, forest_params=FAST
    )
    assert again == selected.cv_rmse


def test_run_rfe_deterministic():
    ds = signal_noise_dataset(n=45, seed=89)
    a = run_rfe(ds, sizes=[3, 2], k=3, seed=7, forest_params=FAST)
    b = run_rfe(ds, sizes=[3, 2], k=3, seed=7, forest_params=FAST)
    assert a.to_dict() == b.to_dict()


def test_run_rfe_predrop_when_first_size_below_width():
    ds = signal_noise_dataset()
    result = run_rfe(ds, sizes=[3, 2], k=3, seed=0, forest_params=FAST)
    assert [s.size for s in result.stages] == [3, 2]
    assert len(result.stages[0].features) == 3


def test_run_rfe_size_validation():
    ds = signal_noise_dataset(n=30)
    with pytest.raises(ValueError):
        run_rfe(ds, sizes=[], k=3)
    with pytest.raises(ValueError):
        run_rfe(ds, sizes=[2, 3], k=3)
    with pytest.raises(ValueError):
        run_rfe(ds, sizes=[3, 3], k=3)
    with pytest.raises(ValueError):
        run_rfe(ds, sizes=[9, 2], k=3)
    with pytest.raises(ValueError):
        run_rfe(ds, sizes=[3, 0], k=3)


def test_result_curve_and_csv(tmp_path):
    stage_a = RfeStage(3, ("A", "B", "C"), (("A", 0.5),), 0.75)
    stage_b = RfeStage(2, ("A", "B"), (("A", 0.5),), 0.5)
    result = RfeResult(
        stages=(stage_a, stage_b),
        selected_size=2,
        selected_features=("A", "B"),
        seed=0,
        k=3,
    )
    assert result.curve == [(3, 0.75), (2, 0.5)]
    path = tmp_path / "curve.csv"
    result.save_curve(path)
    assert path.read_text() == "size,rmse\n3,0.75\n2,0.5\n"
    doc = result.to_dict()
    assert doc["selected_size"] == 2
    assert doc["curve"] == [[3, 0.75], [2, 0.5]]
