"""Pure numpy/scipy versions of the compiled kernels.

Same signatures and bit-identical results as ``_kernels``. Neighbor pairs
are enumerated cell-pair by cell-pair in vectorized chunks instead of one
query at a time.
"""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

_CHUNK = 1 << 22


def cell_neighbors(keys, lut, steps):
    # dense (cell, offset) table read row-major is already in CSR order
    table = lut[keys[:, None] + steps[None, :]]
    hit = table >= 0
    ptr = np.concatenate(([0], np.cumsum(hit.sum(axis=1)))).astype(np.intp)
    return ptr, np.ascontiguousarray(table[hit], dtype=np.intp)


def _neighbor_pairs(index, eps2):
    """Yield ``(i, j)`` arrays of original indices with ``d(i, j) <= eps``.

    Every ordered pair appears once, self-pairs included.
    """
    counts = np.diff(index.cell_start)
    rows = np.repeat(np.arange(index.n_cells), np.diff(index.nbr_ptr))
    cols = index.nbr_idx
    work = counts[rows] * counts[cols]
    ends = np.cumsum(work)
    S = index.sorted_points
    lo = 0
    while lo < len(rows):
        base = ends[lo - 1] if lo else 0
        hi = max(int(np.searchsorted(ends, base + _CHUNK, side="right")), lo + 1)
        a, b, w = rows[lo:hi], cols[lo:hi], work[lo:hi]
        rep = np.repeat(np.arange(hi - lo), w)
        first = np.cumsum(w) - w
        t = np.arange(int(w.sum())) - first[rep]
        cb = counts[b][rep]
        pi = index.cell_start[a][rep] + t // cb
        pj = index.cell_start[b][rep] + t % cb
        d2 = np.zeros(len(pi))
        for k in range(S.shape[1]):
            diff = S[pj, k] - S[pi, k]
            d2 = d2 + diff * diff
        keep = d2 <= eps2
        yield index.order[pi[keep]], index.order[pj[keep]]
        lo = hi


def neighbor_counts(index, eps2, n_query):
    out = np.zeros(n_query, dtype=np.int64)
    for i, _ in _neighbor_pairs(index, eps2):
        i = i[i < n_query]
        out += np.bincount(i, minlength=n_query)
    return out


def expand_clusters(index, eps2, core):
    n = index.n
    core = core.astype(bool)
    core_i, core_j, border_i, border_j = [], [], [], []
    for i, j in _neighbor_pairs(index, eps2):
        cj = core[j]
        both = core[i] & cj
        core_i.append(i[both])
        core_j.append(j[both])
        edge = ~core[i] & cj
        border_i.append(i[edge])
        border_j.append(j[edge])
    ci, cj = np.concatenate(core_i), np.concatenate(core_j)
    graph = coo_matrix((np.ones(len(ci), dtype=np.int8), (ci, cj)), shape=(n, n))
    _, comp = connected_components(graph, directed=False)

    labels = np.full(n, -1, dtype=np.int64)
    core_idx = np.flatnonzero(core)
    if len(core_idx) == 0:
        return labels
    # number clusters by their lowest-index core point
    comp_core = comp[core_idx]
    uniq, first = np.unique(comp_core, return_index=True)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(core_idx[first], kind="stable")] = np.arange(len(uniq))
    labels[core_idx] = rank[np.searchsorted(uniq, comp_core)]

    bi, bj = np.concatenate(border_i), np.concatenate(border_j)
    if len(bi):
        best = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(best, bi, labels[bj])
        hit = np.unique(bi)
        labels[hit] = best[hit]
    return labels
