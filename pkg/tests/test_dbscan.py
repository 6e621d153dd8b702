import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from periodic_dbscan import DbscanParams, dbscan
from periodic_dbscan.exceptions import ParameterError


def definition_oracle(X, eps, min_points):
    """Core mask, core-component ids and noise mask straight from the
    definitions."""
    X = np.asarray(X, dtype=float).reshape(len(X), -1)
    adj = ((X[:, None] - X[None]) ** 2).sum(-1) <= eps * eps
    core = adj.sum(1) >= min_points
    _, comp = connected_components(adj & core[:, None] & core[None, :], directed=False)
    reach = (adj & core[None, :]).any(1)
    return adj, core, comp, ~reach


def check_semantics(X, labels, eps, min_points):
    adj, core, comp, noise = definition_oracle(X, eps, min_points)
    assert np.array_equal(labels == -1, noise)
    # core partition equals components of the core graph
    lc, cc = labels[core], comp[core]
    assert len(np.unique(np.stack([lc, cc], 1), axis=0)) == len(np.unique(lc)) == len(np.unique(cc))
    for i in np.flatnonzero(~core & ~noise):
        assert (adj[i] & core & (labels == labels[i])).any()
    # each id is shared by a core point
    assert set(labels[labels >= 0]) <= set(labels[core])
    return core, noise


def test_worked_example():
    # definition_oracle: 0.05 has 3 neighbors (core); 0.0, 0.1 border; 0.5 noise
    X = [[0.00], [0.05], [0.10], [0.50]]
    _, core, _, noise = definition_oracle(X, 0.06, 3)
    assert core.tolist() == [False, True, False, False]
    assert noise.tolist() == [False, False, False, True]
    assert dbscan(X, DbscanParams(0.06, 3)).tolist() == [0, 0, 0, -1]


def test_min_points_one_has_no_noise(rng):
    X = rng.random((200, 2))
    labels = dbscan(X, DbscanParams(0.05, 1))
    assert np.all(labels >= 0)
    _, _, comp, _ = definition_oracle(X, 0.05, 1)
    assert labels.max() + 1 == len(np.unique(comp))


def test_empty():
    assert dbscan(np.zeros((0, 3)), DbscanParams(0.1, 3)).shape == (0,)


@pytest.mark.parametrize("bad", [dict(epsilon=0.0), dict(epsilon=-1.0), dict(epsilon=float("nan")),
                                 dict(epsilon=0.1, min_points=0), dict(epsilon=0.1, min_points=2.5)])
def test_invalid_params(bad):
    with pytest.raises(ParameterError):
        DbscanParams(**bad)


def test_ids_follow_first_core_point():
    X = [[5.0], [5.01], [5.02], [0.0], [0.01], [0.02]]
    assert dbscan(X, DbscanParams(0.015, 2)).tolist() == [0, 0, 0, 1, 1, 1]


def test_border_goes_to_lowest_cluster():
    # 10 is a border point between cores 11 and 9, which are not linked
    X = [[11.0], [12.0], [11.5], [10.0], [9.0], [8.0], [8.5]]
    labels = dbscan(X, DbscanParams(1.0, 4))
    assert labels.tolist() == [0, 0, 0, 0, 1, 1, 1]


@pytest.mark.parametrize("seed", range(25))
def test_random_semantics(seed, backend):
    rng = np.random.default_rng(seed)
    D = int(rng.integers(1, 4))
    X = rng.random((int(rng.integers(5, 400)), D))
    eps, mp = float(rng.uniform(0.02, 0.3)), int(rng.integers(1, 9))
    check_semantics(X, dbscan(X, DbscanParams(eps, mp), backend=backend), eps, mp)


@pytest.mark.parametrize("seed", range(10))
def test_permutation_robustness(seed):
    rng = np.random.default_rng(100 + seed)
    X = rng.random((300, 2))
    params = DbscanParams(0.06, 4)
    a = dbscan(X, params)
    perm = rng.permutation(len(X))
    b = np.empty_like(a)
    b[perm] = dbscan(X[perm], params)
    core, noise = check_semantics(X, b, params.epsilon, params.min_points)
    assert np.array_equal(a == -1, b == -1)
    pairs = np.unique(np.stack([a[core], b[core]], 1), axis=0)
    assert len(pairs) == len(np.unique(a[core]))


def test_large_dense_cluster_no_recursion_limit():
    X = np.linspace(0, 1, 50_000).reshape(-1, 1)
    labels = dbscan(X, DbscanParams(1e-4, 2))
    assert np.all(labels == 0)
