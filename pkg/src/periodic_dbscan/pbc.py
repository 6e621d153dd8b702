"""DBSCAN on domains with periodic dimensions via periodic extension.

The data are padded with periodic copies of every point lying within
``eps`` of a periodic face, ordinary open-boundary DBSCAN runs on the padded
set, and cluster ids that meet at a periodic copy are merged with a
union-find table.

Two refinements over a naive merge keep the result identical to DBSCAN
under the minimum-image metric:

* A copy carries the core status of its original. Copies near the outer
  edge of the padding see a truncated neighborhood and would otherwise be
  demoted, which can cut a chain of core points that runs across the seam.
* Ids are merged only through copies of core points. A border point may
  be reachable from two different clusters; merging through it would fuse
  them.

If an original point still ends up as noise while one of its copies is
clustered (this happens when the padded run is plain DBSCAN without core
inheritance), the original adopts the copy's cluster.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dbscan import NOISE, DbscanParams
from .exceptions import InputError, InputShapeError, ParameterError
from .geometry import DomainSpec, as_points, is_wrapped, wrap_points
from .index import NeighborIndex, check_epsilon


@dataclass
class PaddedSet:
    """Periodic copies of near-boundary points.

    ``points[k] == original[origin[k]] + shifts[k] * period`` per dimension,
    with each shift in {-1, 0, 1} and at least one non-zero.
    """

    points: np.ndarray
    origin: np.ndarray
    shifts: np.ndarray

    def __len__(self):
        return len(self.origin)


class LinkTable:
    """Union-find over cluster ids; every class is represented by its
    smallest member."""

    def __init__(self):
        self._parent = {}

    def _check(self, x):
        x = int(x)
        if x < 0:
            raise ParameterError("noise cannot be linked")
        return x

    def find(self, x) -> int:
        x = self._check(x)
        root = x
        while self._parent.get(root, root) != root:
            root = self._parent[root]
        while x != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        lo, hi = min(ra, rb), max(ra, rb)
        self._parent.setdefault(lo, lo)
        self._parent[hi] = lo

    def classes(self) -> list:
        """Linked classes with more than one member, sorted."""
        groups = {}
        for x in self._parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted(sorted(g) for g in groups.values() if len(g) > 1)

    def __len__(self):
        return len(self.classes())

    def __repr__(self):
        return f"LinkTable({self.classes()})"


def extend_periodic(points, domain: DomainSpec, epsilon) -> PaddedSet:
    """Copy every point within ``epsilon`` of a periodic face across it.

    A point near ``k`` periodic faces yields ``2**k - 1`` copies (edges and
    corners included). Copies are ordered by origin index, then by shift
    vector in lexicographic order.
    """
    eps = check_epsilon(epsilon)
    domain.check_epsilon(eps)
    X = as_points(points, domain.ndim)
    if not is_wrapped(X, domain):
        raise InputError("coordinates must be wrapped into [lower, upper) on periodic axes")
    n, ndim = X.shape
    lower, upper, period = domain.lower, domain.upper, domain.periods

    # per-axis masks for the +period and -period copies
    fits = {}
    for k in np.flatnonzero(domain.periodic_mask):
        fits[k, 1] = X[:, k] + period[k] <= upper[k] + eps
        fits[k, -1] = X[:, k] - period[k] >= lower[k] - eps

    choices = [(-1, 0, 1) if p else (0,) for p in domain.periodic_mask]
    origin_parts, rank_parts, shift_list = [], [], []
    for rank, shift in enumerate(itertools.product(*choices)):
        if not any(shift):
            continue
        mask = np.ones(n, dtype=bool)
        for k, s in enumerate(shift):
            if s:
                mask &= fits[k, s]
        idx = np.flatnonzero(mask)
        origin_parts.append(idx)
        rank_parts.append(np.full(len(idx), len(shift_list), dtype=np.int64))
        shift_list.append(shift)

    if not origin_parts or n == 0:
        return PaddedSet(
            np.zeros((0, ndim)), np.zeros(0, dtype=np.intp), np.zeros((0, ndim), dtype=np.int8)
        )
    origin = np.concatenate(origin_parts)
    rank = np.concatenate(rank_parts)
    srt = np.lexsort((rank, origin))
    origin, rank = origin[srt].astype(np.intp), rank[srt]
    shifts = np.array(shift_list, dtype=np.int8)[rank].reshape(-1, ndim)
    offset = np.where(domain.periodic_mask, period, 0.0)
    padded = X[origin] + shifts * offset
    return PaddedSet(np.ascontiguousarray(padded), origin, shifts)


def _check_lengths(labels_all, padded: PaddedSet, n_original):
    labels_all = np.asarray(labels_all, dtype=np.int64)
    n_original = int(n_original)
    if labels_all.ndim != 1 or len(labels_all) != n_original + len(padded):
        raise InputShapeError(
            f"expected {n_original} + {len(padded)} labels, got {labels_all.shape}"
        )
    return labels_all, n_original


def link_labels(labels_all, padded: PaddedSet, n_original, core=None) -> LinkTable:
    """Link the cluster id of each copy with that of its original.

    ``core`` is the core mask of the originals; when given, only copies of
    core points create links. Without it every disagreeing non-noise pair is
    linked, which is only safe when no border point touches two clusters.
    """
    labels_all, n = _check_lengths(labels_all, padded, n_original)
    table = LinkTable()
    if len(padded) == 0:
        return table
    l_orig = labels_all[padded.origin]
    l_pad = labels_all[n:]
    keep = (l_orig >= 0) & (l_pad >= 0) & (l_orig != l_pad)
    if core is not None:
        core = np.asarray(core, dtype=bool)
        if core.shape != (n,):
            raise InputShapeError(f"core mask must have shape ({n},), got {core.shape}")
        keep &= core[padded.origin]
    if keep.any():
        pairs = np.unique(np.stack([l_orig[keep], l_pad[keep]], axis=1), axis=0)
        for a, b in pairs.tolist():
            table.union(a, b)
    return table


def resolve_labels(labels_all, links: LinkTable, padded: PaddedSet, n_original) -> np.ndarray:
    """Final labels of the originals: linked ids collapse to the smallest
    one, then ids are renumbered 0..k-1 keeping their order."""
    labels_all, n = _check_lengths(labels_all, padded, n_original)
    ids = np.unique(labels_all[labels_all >= 0])
    rep = np.array([links.find(x) for x in ids.tolist()], dtype=np.int64)

    def resolve(lab):
        out = np.full(len(lab), NOISE, dtype=np.int64)
        hit = lab >= 0
        out[hit] = rep[np.searchsorted(ids, lab[hit])]
        return out

    labels = resolve(labels_all[:n])
    if len(padded):
        l_pad = resolve(labels_all[n:])
        adopt = (labels[padded.origin] == NOISE) & (l_pad >= 0)
        if adopt.any():
            target = padded.origin[adopt]
            best = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
            np.minimum.at(best, target, l_pad[adopt])
            labels[target] = best[target]

    clustered = labels >= 0
    labels[clustered] = np.searchsorted(np.unique(labels[clustered]), labels[clustered])
    return labels


@dataclass
class PeriodicClustering:
    """Full output of one periodic run."""

    labels: np.ndarray
    core: np.ndarray
    padded: PaddedSet
    labels_all: np.ndarray
    links: LinkTable

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max() + 1) if len(self.labels) else 0

    @property
    def n_noise(self) -> int:
        return int(np.count_nonzero(self.labels == NOISE))

    @property
    def n_padded(self) -> int:
        return len(self.padded)


def cluster_periodic(points, domain: DomainSpec, params: DbscanParams, backend=None):
    """Run the periodic pipeline and keep the intermediate products."""
    X = wrap_points(points, domain)
    domain.check_epsilon(params.epsilon)
    n = len(X)
    padded = extend_periodic(X, domain, params.epsilon)
    index = NeighborIndex(np.vstack([X, padded.points]), params.epsilon, backend=backend)
    # originals see their full torus neighborhood in the padded set
    core = index.neighbor_counts(n) >= params.min_points
    core_all = np.concatenate([core, core[padded.origin]])
    labels_all = index.expand_clusters(core_all)
    links = link_labels(labels_all, padded, n, core=core)
    labels = resolve_labels(labels_all, links, padded, n)
    return PeriodicClustering(labels, core, padded, labels_all, links)


def dbscan_periodic(points, domain: DomainSpec, params: DbscanParams, backend=None) -> np.ndarray:
    """DBSCAN labels for ``points`` under the domain's boundary conditions.

    Input need not be wrapped. With every dimension open this returns
    exactly what :func:`~periodic_dbscan.dbscan.dbscan` returns.
    """
    return cluster_periodic(points, domain, params, backend=backend).labels
