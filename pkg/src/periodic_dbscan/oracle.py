"""O(N^2) reference DBSCAN under the minimum-image metric, and a
structural comparison of two clusterings.

Nothing here touches the grid index or the padding code.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .dbscan import NOISE, DbscanParams
from .exceptions import InputShapeError
from .geometry import DomainSpec, min_image_sqdist, wrap_points

_ROW_BLOCK = 512


def adjacency(points, domain: DomainSpec, epsilon: float) -> np.ndarray:
    """Boolean ``(N, N)`` matrix of ``d(i, j) <= epsilon`` under the torus
    metric (diagonal included)."""
    X = wrap_points(points, domain)
    n = len(X)
    adj = np.zeros((n, n), dtype=bool)
    eps2 = epsilon * epsilon
    for lo in range(0, n, _ROW_BLOCK):
        block = X[lo:lo + _ROW_BLOCK, None, :]
        adj[lo:lo + _ROW_BLOCK] = min_image_sqdist(block, X[None, :, :], domain) <= eps2
    return adj


def dbscan_bruteforce(points, domain: DomainSpec, params: DbscanParams) -> np.ndarray:
    """Textbook DBSCAN with exhaustive pairwise distances.

    Seeds are scanned in input order and each cluster is grown to completion
    before the next seed, so ids and border assignment follow the same rule
    as :func:`~periodic_dbscan.dbscan.dbscan`.
    """
    domain.check_epsilon(params.epsilon)
    adj = adjacency(points, domain, params.epsilon)
    n = len(adj)
    core = adj.sum(axis=1) >= params.min_points
    neighbors = [np.flatnonzero(row) for row in adj]
    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for seed in range(n):
        if labels[seed] != NOISE or not core[seed]:
            continue
        labels[seed] = cluster
        queue = deque([seed])
        while queue:
            j = queue.popleft()
            for q in neighbors[j]:
                if labels[q] == NOISE:
                    labels[q] = cluster
                    if core[q]:
                        queue.append(q)
        cluster += 1
    return labels


@dataclass
class ClusterComparison:
    core_partition_match: bool
    noise_match: bool
    border_violations: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.core_partition_match and self.noise_match and not self.border_violations

    def report(self) -> str:
        lines = [
            f"equivalent: {self.equivalent}",
            f"core_partition_match: {self.core_partition_match}",
            f"noise_match: {self.noise_match}",
            f"border_violations: {self.border_violations}",
        ]
        for side in ("a", "b"):
            s = self.summary[side]
            lines.append(
                f"{side}: clusters={s['clusters']} core={s['core']} "
                f"border={s['border']} noise={s['noise']}"
            )
        return "\n".join(lines)


def _same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    if np.any(a < 0) or np.any(b < 0):
        return False
    pairs = np.unique(np.stack([a, b], axis=1), axis=0)
    # a bijection between ids: every id occurs in exactly one pair
    return len(pairs) == len(np.unique(a)) == len(np.unique(b))


def _border_violations(labels, adj, core) -> set:
    bad = set()
    for i in np.flatnonzero((labels >= 0) & ~core):
        support = adj[i] & core & (labels == labels[i])
        if not support.any():
            bad.add(int(i))
    return bad


def compare_clusterings(a, b, points, domain: DomainSpec, params: DbscanParams):
    """Compare two labelings by core partition, noise set and border
    validity, ignoring how cluster ids are numbered.

    Core status is recomputed from the points; neither labeling is trusted.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise InputShapeError(f"label vectors differ in shape: {a.shape} vs {b.shape}")
    adj = adjacency(points, domain, params.epsilon)
    if len(adj) != len(a):
        raise InputShapeError(f"{len(a)} labels for {len(adj)} points")
    core = adj.sum(axis=1) >= params.min_points

    noise_match = bool(np.array_equal(a == NOISE, b == NOISE))
    core_match = _same_partition(a[core], b[core])
    violations = _border_violations(a, adj, core) | _border_violations(b, adj, core)

    def stats(lab):
        return {
            "clusters": int(len(np.unique(lab[lab >= 0]))),
            "core": int(core.sum()),
            "border": int(np.count_nonzero((lab >= 0) & ~core)),
            "noise": int(np.count_nonzero(lab == NOISE)),
        }

    return ClusterComparison(core_match, noise_match, sorted(violations), {"a": stats(a), "b": stats(b)})
