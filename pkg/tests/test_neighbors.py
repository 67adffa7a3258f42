import numpy as np
import pytest
from sklearn.base import clone

from efpredict.neighbors import KnnClassifier
from tests.conftest import make_blobs


def brute_force_predict(X_train, y_train, X_query, k):
    """Reference prediction: sort (distance, row index) pairs per query."""
    out = []
    for q in X_query:
        keyed = sorted(
            (float(np.sum((q - x) ** 2)), i) for i, x in enumerate(X_train)
        )
        votes = np.zeros(3, dtype=int)
        for _, i in keyed[:k]:
            votes[y_train[i]] += 1
        out.append(int(np.argmax(votes)))
    return np.array(out, dtype=np.int64)


def test_matches_brute_force_on_random_data():
    rng = np.random.default_rng(31)
    total = 0
    for trial in range(8):
        n = int(rng.integers(20, 60))
        p = int(rng.integers(1, 5))
        k = int(rng.choice([1, 3, 5, 7]))
        X_train = rng.normal(size=(n, p))
        y_train = rng.integers(0, 3, size=n)
        X_query = rng.normal(size=(30, p))
        model = KnnClassifier(n_neighbors=k).fit(X_train, y_train)
        assert np.array_equal(
            model.predict(X_query),
            brute_force_predict(X_train, y_train, X_query, k),
        )
        total += 30
    assert total >= 200


def test_single_neighbor_returns_nearest_label():
    X = np.array([[0.0], [10.0], [20.0]])
    y = np.array([0, 1, 2])
    model = KnnClassifier(n_neighbors=1).fit(X, y)
    assert np.array_equal(
        model.predict(np.array([[1.0], [11.0], [19.0]])), [0, 1, 2]
    )


def test_distance_tie_prefers_lower_row_index():
    X = np.array([[-1.0], [1.0], [5.0]])
    y = np.array([2, 0, 1])
    model = KnnClassifier(n_neighbors=1).fit(X, y)
    assert model.predict(np.array([[0.0]]))[0] == 2


def test_vote_tie_prefers_lowest_class():
    X = np.array([[0.0], [0.0], [0.0], [100.0], [100.0]])
    y = np.array([2, 2, 1, 1, 0])
    model = KnnClassifier(n_neighbors=5).fit(X, y)
    assert model.predict(np.array([[0.0]]))[0] == 1


def test_training_rows_classified_correctly_with_k1():
    X, y = make_blobs(12, sd=0.4, seed=19)
    model = KnnClassifier(n_neighbors=1).fit(X, y)
    assert np.array_equal(model.predict(X), y)


def test_separated_blobs_generalize():
    X, y = make_blobs(25, sd=0.3, seed=23)
    X_new, y_new = make_blobs(15, sd=0.3, seed=29)
    model = KnnClassifier(n_neighbors=5).fit(X, y)
    assert np.mean(model.predict(X_new) == y_new) == 1.0


def test_parameter_validation():
    X, y = make_blobs(4, seed=0)
    with pytest.raises(ValueError, match="odd"):
        KnnClassifier(n_neighbors=4).fit(X, y)
    with pytest.raises(ValueError, match="odd"):
        KnnClassifier(n_neighbors=0).fit(X, y)
    with pytest.raises(ValueError, match="exceeds"):
        KnnClassifier(n_neighbors=13).fit(X, y)
    with pytest.raises(ValueError, match="not fitted"):
        KnnClassifier().predict(X)
    model = KnnClassifier(n_neighbors=3).fit(X, y)
    with pytest.raises(ValueError):
        model.predict(X[:, :1])


def test_fit_copies_training_data():
    X, y = make_blobs(6, seed=2)
    model = KnnClassifier(n_neighbors=3).fit(X, y)
    X[:] = 0.0
    assert not np.array_equal(model.X_, X)


def test_clone_compatible():
    est = KnnClassifier(n_neighbors=7)
    assert clone(est).get_params() == est.get_params()
