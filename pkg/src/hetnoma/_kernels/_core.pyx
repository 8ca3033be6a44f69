# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo hot kernels: grid-based within-trial pair search and
the retention mark reduction.  Semantics identical to ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, realloc
from libc.math cimport floor, INFINITY

cnp.import_array()


cdef struct PairBuf:
    long long *ii
    long long *jj
    Py_ssize_t size
    Py_ssize_t cap


cdef int _push(PairBuf *buf, long long i, long long j) except -1:
    cdef Py_ssize_t newcap
    if buf.size == buf.cap:
        newcap = buf.cap * 2
        buf.ii = <long long *> realloc(buf.ii, newcap * sizeof(long long))
        buf.jj = <long long *> realloc(buf.jj, newcap * sizeof(long long))
        if buf.ii == NULL or buf.jj == NULL:
            raise MemoryError()
        buf.cap = newcap
    buf.ii[buf.size] = i
    buf.jj[buf.size] = j
    buf.size += 1
    return 0


def collect_pairs(double[::1] x, double[::1] y, long long[::1] offsets, double radius):
    """All within-trial pairs (i < j, global indices) with d^2 <= radius^2."""
    cdef Py_ssize_t ntr = offsets.shape[0] - 1
    cdef double r2 = radius * radius
    cdef PairBuf buf
    buf.cap = 4096
    buf.size = 0
    buf.ii = <long long *> malloc(buf.cap * sizeof(long long))
    buf.jj = <long long *> malloc(buf.cap * sizeof(long long))
    if buf.ii == NULL or buf.jj == NULL:
        raise MemoryError()

    cdef Py_ssize_t t, lo, hi, n, a, b
    cdef double dx, dy
    cdef double xmin, ymin
    cdef Py_ssize_t ncx, ncy, ncell, c, idx, p, q
    cdef long long *cell_of = NULL
    cdef long long *head = NULL
    cdef long long *nxt = NULL
    cdef Py_ssize_t cx, cy, gx, gy
    cdef long long u, v

    try:
        for t in range(ntr):
            lo = offsets[t]
            hi = offsets[t + 1]
            n = hi - lo
            if n < 2:
                continue
            if n <= 64:
                for a in range(lo, hi):
                    for b in range(a + 1, hi):
                        dx = x[a] - x[b]
                        dy = y[a] - y[b]
                        if dx * dx + dy * dy <= r2:
                            _push(&buf, a, b)
                continue
            # uniform grid bucket sort, cell size = radius
            xmin = x[lo]
            ymin = y[lo]
            for a in range(lo + 1, hi):
                if x[a] < xmin: xmin = x[a]
                if y[a] < ymin: ymin = y[a]
            ncx = 0
            ncy = 0
            for a in range(lo, hi):
                cx = <Py_ssize_t> floor((x[a] - xmin) / radius)
                cy = <Py_ssize_t> floor((y[a] - ymin) / radius)
                if cx + 1 > ncx: ncx = cx + 1
                if cy + 1 > ncy: ncy = cy + 1
            ncell = ncx * ncy
            cell_of = <long long *> malloc(n * sizeof(long long))
            head = <long long *> malloc(ncell * sizeof(long long))
            nxt = <long long *> malloc(n * sizeof(long long))
            if cell_of == NULL or head == NULL or nxt == NULL:
                raise MemoryError()
            for c in range(ncell):
                head[c] = -1
            for idx in range(n):
                a = lo + idx
                cx = <Py_ssize_t> floor((x[a] - xmin) / radius)
                cy = <Py_ssize_t> floor((y[a] - ymin) / radius)
                c = cx * ncy + cy
                cell_of[idx] = c
                nxt[idx] = head[c]
                head[c] = idx
            for idx in range(n):
                a = lo + idx
                cx = cell_of[idx] // ncy
                cy = cell_of[idx] % ncy
                for gx in range(cx - 1, cx + 2):
                    if gx < 0 or gx >= ncx:
                        continue
                    for gy in range(cy - 1, cy + 2):
                        if gy < 0 or gy >= ncy:
                            continue
                        u = head[gx * ncy + gy]
                        while u >= 0:
                            if u > idx:  # each unordered pair once
                                b = lo + u
                                dx = x[a] - x[b]
                                dy = y[a] - y[b]
                                if dx * dx + dy * dy <= r2:
                                    _push(&buf, a, b)
                            u = nxt[u]
            free(cell_of); cell_of = NULL
            free(head); head = NULL
            free(nxt); nxt = NULL

        ii = np.empty(buf.size, dtype=np.int64)
        jj = np.empty(buf.size, dtype=np.int64)
        cdef long long[::1] iv = ii
        cdef long long[::1] jv = jj
        for p in range(buf.size):
            iv[p] = buf.ii[p]
            jv[p] = buf.jj[p]
        return ii, jj
    finally:
        if cell_of != NULL: free(cell_of)
        if head != NULL: free(head)
        if nxt != NULL: free(nxt)
        free(buf.ii)
        free(buf.jj)


def min_neighbor_mark(Py_ssize_t n, long long[::1] ii, long long[::1] jj, double[::1] marks):
    """Per point, the minimum mark among its neighbors (inf if isolated)."""
    best_arr = np.full(n, np.inf)
    cdef double[::1] best = best_arr
    cdef Py_ssize_t p
    cdef long long a, b
    for p in range(ii.shape[0]):
        a = ii[p]
        b = jj[p]
        if marks[b] < best[a]:
            best[a] = marks[b]
        if marks[a] < best[b]:
            best[b] = marks[a]
    return best_arr


BACKEND = "cython"
