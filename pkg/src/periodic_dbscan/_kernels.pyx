# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled neighbor counting and cluster expansion over a cell grid."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def cell_neighbors(const cnp.int64_t[::1] keys, const Py_ssize_t[::1] lut,
                   const cnp.int64_t[::1] steps):
    """CSR lists of occupied neighbor cells via a dense key -> cell table."""
    cdef Py_ssize_t n_cells = keys.shape[0]
    cdef Py_ssize_t n_steps = steps.shape[0]
    ptr_arr = np.zeros(n_cells + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] ptr = ptr_arr
    cdef Py_ssize_t c, s, nb, total = 0
    with nogil:
        for c in range(n_cells):
            for s in range(n_steps):
                if lut[keys[c] + steps[s]] >= 0:
                    total += 1
            ptr[c + 1] = total
    idx_arr = np.empty(total, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_arr
    total = 0
    with nogil:
        for c in range(n_cells):
            for s in range(n_steps):
                nb = lut[keys[c] + steps[s]]
                if nb >= 0:
                    idx[total] = nb
                    total += 1
    return ptr_arr, idx_arr


def neighbor_counts(index, double eps2, Py_ssize_t n_query):
    cdef const double[:, ::1] S = index.sorted_points
    cdef const Py_ssize_t[::1] order = index.order
    cdef const Py_ssize_t[::1] cell_start = index.cell_start
    cdef const Py_ssize_t[::1] nbr_ptr = index.nbr_ptr
    cdef const Py_ssize_t[::1] nbr_idx = index.nbr_idx
    cdef Py_ssize_t ndim = S.shape[1]
    cdef Py_ssize_t n_cells = cell_start.shape[0] - 1
    out = np.zeros(n_query, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = out
    cdef Py_ssize_t c, i, p, t, nb, q, k
    cdef double d2, diff
    cdef cnp.int64_t cnt
    with nogil:
        # walk queries cell by cell so neighboring cells stay in cache
        for c in range(n_cells):
            for p in range(cell_start[c], cell_start[c + 1]):
                i = order[p]
                if i >= n_query:
                    continue
                cnt = 0
                for t in range(nbr_ptr[c], nbr_ptr[c + 1]):
                    nb = nbr_idx[t]
                    for q in range(cell_start[nb], cell_start[nb + 1]):
                        d2 = 0.0
                        for k in range(ndim):
                            diff = S[q, k] - S[p, k]
                            d2 = d2 + diff * diff
                        if d2 <= eps2:
                            cnt += 1
                counts[i] = cnt
    return out


def expand_clusters(index, double eps2, const unsigned char[::1] core):
    cdef const double[:, ::1] X = index.points
    cdef const double[:, ::1] S = index.sorted_points
    cdef const Py_ssize_t[::1] order = index.order
    cdef const Py_ssize_t[::1] cell_start = index.cell_start
    cdef const Py_ssize_t[::1] pcell = index.point_cell
    cdef const Py_ssize_t[::1] nbr_ptr = index.nbr_ptr
    cdef const Py_ssize_t[::1] nbr_idx = index.nbr_idx
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t ndim = X.shape[1]
    out = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] labels = out
    cdef Py_ssize_t[::1] stack = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t seed, top, j, c, t, nb, p, q, k
    cdef cnp.int64_t cluster = 0
    cdef double d2, diff
    with nogil:
        for seed in range(n):
            if labels[seed] != -1 or not core[seed]:
                continue
            labels[seed] = cluster
            stack[0] = seed
            top = 1
            while top > 0:
                top -= 1
                j = stack[top]
                c = pcell[j]
                for t in range(nbr_ptr[c], nbr_ptr[c + 1]):
                    nb = nbr_idx[t]
                    for p in range(cell_start[nb], cell_start[nb + 1]):
                        q = order[p]
                        if labels[q] != -1:
                            continue
                        d2 = 0.0
                        for k in range(ndim):
                            diff = S[p, k] - X[j, k]
                            d2 = d2 + diff * diff
                        if d2 <= eps2:
                            labels[q] = cluster
                            if core[q]:
                                stack[top] = q
                                top += 1
            cluster += 1
    return out
