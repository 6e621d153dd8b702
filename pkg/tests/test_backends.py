"""The compiled kernels and the numpy fallback must agree bit for bit."""

import numpy as np
import pytest

from periodic_dbscan import DbscanParams, DomainSpec, available_backends, build_index, cluster_periodic

needs_compiled = pytest.mark.skipif("compiled" not in available_backends(), reason="extension not built")


@needs_compiled
@pytest.mark.parametrize("seed", range(15))
def test_counts_and_labels_identical(seed):
    rng = np.random.default_rng(seed)
    D = int(rng.integers(1, 5))
    X = rng.random((int(rng.integers(1, 3000)), D))
    eps = float(rng.uniform(0.01, 0.3))
    a, b = build_index(X, eps, backend="compiled"), build_index(X, eps, backend="python")
    assert np.array_equal(a.neighbor_counts(), b.neighbor_counts())
    core = a.neighbor_counts() >= int(rng.integers(1, 8))
    assert np.array_equal(a.expand_clusters(core), b.expand_clusters(core))


@needs_compiled
@pytest.mark.parametrize("seed", range(5))
def test_periodic_pipeline_identical(seed):
    rng = np.random.default_rng(seed)
    dom = DomainSpec.all_periodic(3)
    X = rng.random((5000, 3))
    params = DbscanParams(0.05, 5)
    a = cluster_periodic(X, dom, params, backend="compiled")
    b = cluster_periodic(X, dom, params, backend="python")
    assert np.array_equal(a.labels_all, b.labels_all)
    assert np.array_equal(a.labels, b.labels)


def test_env_var_forces_fallback(monkeypatch):
    from periodic_dbscan import _backend, _fallback

    monkeypatch.setenv("PERIODIC_DBSCAN_BACKEND", "python")
    assert _backend.get() is _fallback


def test_import_without_extension_falls_back():
    import subprocess
    import sys

    code = """
import sys
class Block:
    def find_spec(self, name, path=None, target=None):
        if name == "periodic_dbscan._kernels":
            raise ImportError("blocked")
sys.meta_path.insert(0, Block())
import periodic_dbscan as p
assert p.available_backends() == ["python"], p.available_backends()
labels = p.dbscan_periodic([[0.02], [0.98], [0.5]], p.DomainSpec.all_periodic(1), p.DbscanParams(0.05, 2))
print(labels.tolist())
"""
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "[0, 0, -1]"
