import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from periodic_dbscan import build_index, query_radius
from periodic_dbscan.exceptions import InputShapeError, ParameterError


def brute_radius(X, center, eps):
    d2 = ((X - center) ** 2).sum(axis=1)
    return np.flatnonzero(d2 <= eps * eps)


def test_empty_index():
    idx = build_index(np.zeros((0, 2)), 0.1)
    assert len(query_radius(idx, [0.0, 0.0], 0.1)) == 0
    assert len(idx.neighbor_counts()) == 0


def test_single_point_self_inclusion():
    idx = build_index([[0.3, 0.7]], 0.1)
    assert query_radius(idx, [0.3, 0.7], 0.1).tolist() == [0]


def test_collinear_example():
    # expected from brute_radius: |0.05-0.0| = 0.05 <= 0.06, |0.05-0.2| = 0.15 > 0.06
    X = np.array([[0.0], [0.05], [0.2]])
    assert brute_radius(X, X[1], 0.06).tolist() == [0, 1]
    assert query_radius(build_index(X, 0.06), [0.05], 0.06).tolist() == [0, 1]


def test_uniform_grid_example():
    X = np.linspace(0.0, 1.0, 11).reshape(-1, 1)
    assert brute_radius(X, [0.5], 0.15).tolist() == [4, 5, 6]
    assert query_radius(build_index(X, 0.15), [0.5], 0.15).tolist() == [4, 5, 6]


def test_far_query_is_empty():
    idx = build_index(np.random.default_rng(0).random((50, 3)), 0.1)
    assert len(query_radius(idx, [10.0, 10.0, 10.0], 0.1)) == 0


def test_boundary_inclusive_on_integers(backend):
    X = np.array([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0], [0.0, 5.0]])
    idx = build_index(X, 5.0, backend=backend)
    assert query_radius(idx, [0.0, 0.0], 5.0).tolist() == [0, 1, 3]
    # pairwise: d01=5, d03=5, d12=5, d13=sqrt(10); d02, d23 > 5
    assert idx.neighbor_counts().tolist() == [3, 4, 2, 3]


def test_degenerate_identical_points(backend):
    X = np.ones((40, 3))
    idx = build_index(X, 1e-9, backend=backend)
    assert idx.neighbor_counts().tolist() == [40] * 40
    assert len(query_radius(idx, [1.0, 1.0, 1.0], 1e-9)) == 40


def test_sparse_spread_uses_compressed_cells(backend):
    # huge extent relative to eps: empty stretches must not cost memory
    X = np.array([[0.0], [1e-3], [1e12], [1e12 + 5e-4]])
    idx = build_index(X, 1e-3, backend=backend)
    assert idx.n_cells <= 4
    assert idx.neighbor_counts().tolist() == [2, 2, 2, 2]


def test_errors():
    with pytest.raises(ParameterError):
        build_index([[0.0]], 0.0)
    with pytest.raises(ParameterError):
        build_index([[0.0]], -1.0)
    idx = build_index([[0.0, 0.0]], 0.1)
    with pytest.raises(InputShapeError):
        query_radius(idx, [0.0], 0.1)
    with pytest.raises(ParameterError):
        query_radius(idx, [0.0, 0.0], 0.2)


@pytest.mark.parametrize("seed", range(20))
def test_oracle_equivalence_random(seed, backend):
    rng = np.random.default_rng(seed)
    n, D = int(rng.integers(1, 1001)), int(rng.integers(1, 5))
    X = rng.random((n, D)) * rng.uniform(0.5, 3.0)
    eps = float(rng.uniform(0.01, 0.5))
    idx = build_index(X, eps, backend=backend)
    counts = idx.neighbor_counts()
    for i in rng.integers(0, n, size=20):
        expected = brute_radius(X, X[i], eps)
        assert query_radius(idx, X[i], eps).tolist() == expected.tolist()
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(-1)
    assert counts.tolist() == (d2 <= eps * eps).sum(1).tolist()


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda D: st.lists(
            st.lists(st.integers(-5, 5), min_size=D, max_size=D), min_size=1, max_size=40
        )
    ),
    st.integers(1, 4),
)
def test_integer_lattice_property(pts, r):
    X = np.array(pts, dtype=float)
    idx = build_index(X, float(r))
    for i in range(len(X)):
        assert query_radius(idx, X[i], float(r)).tolist() == brute_radius(X, X[i], r).tolist()


def _check_all_counts(X, eps, backend):
    idx = build_index(X, eps, backend=backend)
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(-1)
    assert idx.neighbor_counts().tolist() == (d2 <= eps * eps).sum(1).tolist()
    for i in range(0, len(X), 7):
        assert query_radius(idx, X[i], eps).tolist() == brute_radius(X, X[i], eps).tolist()
    return idx


def test_high_dimensional_data(backend):
    rng = np.random.default_rng(8)
    X = rng.random((300, 8))
    idx = _check_all_counts(X, 0.6, backend)
    assert len(idx.grid_axes) == 4


def test_sparse_key_space_uses_sorted_keys(backend):
    # ~200 isolated cells per axis in 4-D: far too many keys for a dense table
    rng = np.random.default_rng(9)
    centers = rng.random((200, 4)) * 1000
    X = np.vstack([centers, centers + 0.3])
    _check_all_counts(X, 1.0, backend)


def test_key_overflow_uses_dict_cells(backend, monkeypatch):
    import periodic_dbscan.index as index_mod

    monkeypatch.setattr(index_mod, "_KEY_LIMIT", 64)
    rng = np.random.default_rng(10)
    X = rng.random((150, 3))
    idx = _check_all_counts(X, 0.15, backend)
    assert not idx._use_keys
