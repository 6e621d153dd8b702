"""Exact fixed-radius neighbor search on a uniform cell grid.

Cells have edge ``>= eps`` so every point within ``eps`` of a query lies in
the query's cell or one of its ``3**g - 1`` neighbors, where the grid spans
``g = min(D, 4)`` axes (the ones with the most cells). Projecting onto fewer
axes only loosens the candidate filter; the final distance test uses every
coordinate, so results stay exact. Occupied cells are
stored sparsely (sorted keys + CSR point lists), so memory is O(N) no matter
how spread out the data is.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import _backend
from .exceptions import InputShapeError, ParameterError
from .geometry import as_points

# slack so floor((x - o) / h) of two points within eps never differs by 2
_CELL_SLACK = 1.0 + 2.0**-20
# keep cell coordinates well inside the range where the slack is sufficient
_MAX_CELLS_PER_AXIS = 2.0**30
_KEY_LIMIT = 2**62
# cells are laid over at most this many axes; distances always use all axes
MAX_GRID_AXES = 4


def check_epsilon(epsilon) -> float:
    eps = float(epsilon)
    if not (np.isfinite(eps) and eps > 0.0):
        raise ParameterError(f"epsilon must be positive and finite, got {epsilon!r}")
    return eps


class NeighborIndex:
    """Radius-``epsilon`` neighbor index over a fixed point set.

    Parameters
    ----------
    points : array_like, shape (N, D)
        Points in open (non-periodic) coordinates.
    epsilon : float
        The only radius this index answers queries for.
    backend : {"auto", "compiled", "python"}, optional
        Kernel implementation used by :meth:`neighbor_counts` and
        :meth:`expand_clusters`.
    """

    def __init__(self, points, epsilon, backend=None):
        self.epsilon = check_epsilon(epsilon)
        self.eps2 = self.epsilon * self.epsilon
        self.points = as_points(points)
        self.kernels = _backend.get(backend)
        n, ndim = self.points.shape
        self.n, self.ndim = n, ndim
        if n == 0:
            self._build_empty()
        else:
            self._build()

    def _build_empty(self):
        z = np.zeros(0, dtype=np.intp)
        self.order = z
        self.sorted_points = self.points
        self.cell_start = np.zeros(1, dtype=np.intp)
        self.point_cell = z
        self.nbr_ptr = np.zeros(1, dtype=np.intp)
        self.nbr_idx = z
        self.n_cells = 0

    def _build(self):
        X = self.points
        lo, hi = X.min(axis=0), X.max(axis=0)
        spans = hi - lo
        g = min(self.ndim, MAX_GRID_AXES)
        self.grid_axes = np.sort(np.argsort(-spans, kind="stable")[:g])
        self.cell_size = max(self.epsilon * _CELL_SLACK, float(spans.max()) / _MAX_CELLS_PER_AXIS)
        self.origin = lo[self.grid_axes]
        raw = np.floor((X[:, self.grid_axes] - self.origin) / self.cell_size).astype(np.int64)
        extents = raw.max(axis=0) + 1
        dense = np.prod((extents + 2).astype(float)) <= max(8 * self.n, 1 << 20)
        self._axis_raw, self._axis_comp = [], []
        if dense:
            comp = raw + 1
            for e in extents.tolist():
                self._axis_raw.append(np.arange(e, dtype=np.int64))
                self._axis_comp.append(np.arange(1, e + 1, dtype=np.int64))
        else:
            # squeeze empty stretches of each axis down to a single empty
            # cell; adjacency (|diff| <= 1) is unchanged by this relabeling
            comp = np.empty_like(raw)
            for k in range(raw.shape[1]):
                vals, inv = np.unique(raw[:, k], return_inverse=True)
                steps = np.where(np.diff(vals) == 1, 1, 2)
                cvals = np.concatenate(([1], 1 + np.cumsum(steps))).astype(np.int64)
                comp[:, k] = cvals[inv.ravel()]
                self._axis_raw.append(vals)
                self._axis_comp.append(cvals)
        radix = [int(c[-1]) + 2 for c in self._axis_comp]
        total = 1
        for r in radix:
            total *= r
        self._use_keys = total < _KEY_LIMIT
        if self._use_keys:
            strides = np.ones(len(radix), dtype=np.int64)
            for k in range(len(radix) - 2, -1, -1):
                strides[k] = strides[k + 1] * radix[k + 1]
            self._strides = strides
            pkey = comp @ strides
            order = np.argsort(pkey, kind="stable")
            skey = pkey[order]
            first = np.concatenate(([True], skey[1:] != skey[:-1]))
            self._cell_keys = skey[first]
        else:
            order = np.lexsort(comp.T[::-1])
            scomp = comp[order]
            first = np.concatenate(([True], np.any(scomp[1:] != scomp[:-1], axis=1)))
            self._cell_lookup = {tuple(r): c for c, r in enumerate(scomp[first].tolist())}
        starts = np.flatnonzero(first)
        self.n_cells = len(starts)
        self.order = order.astype(np.intp)
        self.cell_start = np.concatenate((starts, [self.n])).astype(np.intp)
        cell_of_sorted = np.cumsum(first) - 1
        self.point_cell = np.empty(self.n, dtype=np.intp)
        self.point_cell[order] = cell_of_sorted
        self.sorted_points = np.ascontiguousarray(X[order])
        self._cell_comp = comp[order[starts]]
        self._build_cell_neighbors()

    def _offsets(self):
        return itertools.product((-1, 0, 1), repeat=len(self.grid_axes))

    def _build_cell_neighbors(self):
        offsets = list(self._offsets())
        if not self._use_keys:
            self._build_cell_neighbors_dict(offsets)
            return
        keys = self._cell_keys
        steps = np.array([int(np.dot(off, self._strides)) for off in offsets], dtype=np.int64)
        total = int(np.prod([int(c[-1]) + 2 for c in self._axis_comp], dtype=object))
        if total <= max(8 * self.n, 1 << 20):
            # compact key space: dense key -> cell table
            lut = np.full(total, -1, dtype=np.intp)
            lut[keys] = np.arange(self.n_cells)
            self.nbr_ptr, self.nbr_idx = self.kernels.cell_neighbors(keys, lut, steps)
            return
        rows, cols = [], []
        for step in steps.tolist():
            target = keys + step
            pos = np.searchsorted(keys, target)
            pos[pos == len(keys)] = 0
            hit = np.flatnonzero(keys[pos] == target)
            rows.append(hit)
            cols.append(pos[hit])
        self._set_csr(np.concatenate(rows), np.concatenate(cols))

    def _build_cell_neighbors_dict(self, offsets):
        rows, cols = [], []
        for c, base in enumerate(self._cell_comp.tolist()):
            for off in offsets:
                nb = self._cell_lookup.get(tuple(b + o for b, o in zip(base, off)))
                if nb is not None:
                    rows.append(c)
                    cols.append(nb)
        self._set_csr(np.array(rows, dtype=np.intp), np.array(cols, dtype=np.intp))

    def _set_csr(self, rows, cols):
        srt = np.lexsort((cols, rows))
        self.nbr_idx = np.ascontiguousarray(cols[srt], dtype=np.intp)
        self.nbr_ptr = np.searchsorted(rows[srt], np.arange(self.n_cells + 1)).astype(np.intp)

    def _candidate_cells(self, center: np.ndarray) -> np.ndarray:
        raw = np.floor((center[self.grid_axes] - self.origin) / self.cell_size)
        choices = []
        for k in range(len(self.grid_axes)):
            vals, cvals = self._axis_raw[k], self._axis_comp[k]
            want = np.array([raw[k] - 1, raw[k], raw[k] + 1])
            pos = np.clip(np.searchsorted(vals, want), 0, len(vals) - 1)
            hit = vals[pos] == want
            if not hit.any():
                return np.zeros(0, dtype=np.intp)
            choices.append(cvals[pos[hit]])
        found = []
        for combo in itertools.product(*choices):
            if self._use_keys:
                key = int(np.dot(combo, self._strides))
                pos = int(np.searchsorted(self._cell_keys, key))
                if pos < self.n_cells and self._cell_keys[pos] == key:
                    found.append(pos)
            else:
                c = self._cell_lookup.get(tuple(int(v) for v in combo))
                if c is not None:
                    found.append(c)
        return np.array(found, dtype=np.intp)

    def query_radius(self, center, epsilon=None) -> np.ndarray:
        """Sorted indices of all points within ``epsilon`` (inclusive) of
        ``center``."""
        if epsilon is not None and float(epsilon) != self.epsilon:
            raise ParameterError(
                f"index was built for eps={self.epsilon:g}, queried with {float(epsilon):g}"
            )
        center = np.asarray(center, dtype=np.float64).reshape(-1)
        if center.shape[0] != self.ndim:
            raise InputShapeError(
                f"query has {center.shape[0]} dimensions, index has {self.ndim}"
            )
        if self.n == 0 or not np.all(np.isfinite(center)):
            return np.zeros(0, dtype=np.intp)
        cells = self._candidate_cells(center)
        if len(cells) == 0:
            return np.zeros(0, dtype=np.intp)
        pos = np.concatenate(
            [np.arange(self.cell_start[c], self.cell_start[c + 1]) for c in cells]
        )
        cand = self.sorted_points[pos]
        d2 = np.zeros(len(pos))
        for k in range(self.ndim):
            diff = cand[:, k] - center[k]
            d2 = d2 + diff * diff
        return np.sort(self.order[pos[d2 <= self.eps2]])

    def neighbor_counts(self, n_query=None) -> np.ndarray:
        """Size of the inclusive eps-neighborhood of each of the first
        ``n_query`` indexed points (all points by default)."""
        n_query = self.n if n_query is None else int(n_query)
        if not 0 <= n_query <= self.n:
            raise ParameterError(f"n_query must be in [0, {self.n}], got {n_query}")
        if n_query == 0:
            return np.zeros(0, dtype=np.int64)
        return self.kernels.neighbor_counts(self, self.eps2, n_query)

    def expand_clusters(self, core) -> np.ndarray:
        """DBSCAN labels given the core mask of every indexed point.

        Clusters are numbered by their lowest-index core point. A non-core
        point within eps of cores from several clusters joins the one with
        the lowest id, which is the cluster a sequential seed scan reaches
        it from first.
        """
        core = np.ascontiguousarray(core, dtype=np.uint8)
        if core.shape != (self.n,):
            raise InputShapeError(f"core mask must have shape ({self.n},), got {core.shape}")
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        return self.kernels.expand_clusters(self, self.eps2, core)


def build_index(points, epsilon, backend=None) -> NeighborIndex:
    return NeighborIndex(points, epsilon, backend=backend)


def query_radius(index: NeighborIndex, center, epsilon) -> np.ndarray:
    return index.query_radius(center, epsilon)
