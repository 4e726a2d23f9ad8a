# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: anchored-box counting and Warnock pair sums."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

BACKEND = "cython"


cdef inline Py_ssize_t _lower_bound(const double[::1] col, double v) noexcept nogil:
    # first index with col[i] >= v
    cdef Py_ssize_t lo = 0, hi = col.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if col[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def count_in_boxes(points, queries, int threads=1):
    """Number of points strictly below each query in every coordinate."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] qs = np.ascontiguousarray(queries, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], m = qs.shape[0], d = pts.shape[1]
    out = np.zeros(m, dtype=np.int64)
    if n == 0 or m == 0:
        return out
    if d == 1:
        return np.searchsorted(np.sort(pts[:, 0]), qs[:, 0], side="left").astype(np.int64)
    if d == 2:
        return _count_2d(pts, qs)
    order = np.argsort(pts[:, 0], kind="stable")
    cdef double[:, ::1] sp = np.ascontiguousarray(pts[order])
    cdef double[::1] first = np.ascontiguousarray(sp[:, 0])
    cdef double[:, ::1] q = qs
    cdef cnp.int64_t[::1] res = out
    cdef Py_ssize_t j, k, i, stop
    cdef cnp.int64_t c
    cdef bint inside
    for j in prange(m, nogil=True, schedule="static", num_threads=max(threads, 1)):
        stop = _lower_bound(first, q[j, 0])
        c = 0
        for k in range(stop):
            inside = True
            for i in range(1, d):
                if sp[k, i] >= q[j, i]:
                    inside = False
                    break
            if inside:
                c = c + 1
        res[j] = c
    return out


cdef object _count_2d(cnp.ndarray[cnp.float64_t, ndim=2] pts, cnp.ndarray[cnp.float64_t, ndim=2] qs):
    # sweep along x, Fenwick tree over the ranks of y
    cdef Py_ssize_t n = pts.shape[0], m = qs.shape[0]
    ys = np.unique(pts[:, 1])
    cdef cnp.int64_t[::1] prank = np.searchsorted(ys, pts[:, 1], side="left").astype(np.int64) + 1
    cdef cnp.int64_t[::1] qrank = np.searchsorted(ys, qs[:, 1], side="left").astype(np.int64)
    cdef cnp.int64_t[::1] porder = np.argsort(pts[:, 0], kind="stable").astype(np.int64)
    cdef cnp.int64_t[::1] qorder = np.argsort(qs[:, 0], kind="stable").astype(np.int64)
    cdef double[::1] px = np.ascontiguousarray(pts[:, 0])
    cdef double[::1] qx = np.ascontiguousarray(qs[:, 0])
    cdef Py_ssize_t size = ys.shape[0]
    cdef cnp.int64_t[::1] tree = np.zeros(size + 1, dtype=np.int64)
    out = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    cdef Py_ssize_t a = 0, j, q, pos
    cdef cnp.int64_t c
    with nogil:
        for j in range(m):
            q = qorder[j]
            while a < n and px[porder[a]] < qx[q]:
                pos = prank[porder[a]]
                while pos <= size:
                    tree[pos] += 1
                    pos += pos & (-pos)
                a += 1
            c = 0
            pos = qrank[q]
            while pos > 0:
                c += tree[pos]
                pos -= pos & (-pos)
            res[q] = c
    return out


def warnock_row_sums(points, int threads=1):
    """Row ``k`` holds ``sum_{l >= k} w_kl * prod_i (1 - max(b_ki, b_li))``.

    ``w_kk = 1`` and ``w_kl = 2`` off the diagonal, so the row sums add up
    to the full symmetric double sum.  Each row is Neumaier-compensated;
    rows are independent so the result does not depend on ``threads``.
    """
    cdef const double[:, ::1] b = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = b.shape[0], d = b.shape[1]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] rows = out
    cdef Py_ssize_t k, l, i
    cdef double s, comp, term, t, a, c
    for k in prange(n, nogil=True, schedule="dynamic", num_threads=max(threads, 1)):
        term = 1.0
        for i in range(d):
            term = term * (1.0 - b[k, i])
        s = term
        comp = 0.0
        for l in range(k + 1, n):
            term = 2.0
            for i in range(d):
                a = b[k, i]
                c = b[l, i]
                if c > a:
                    a = c
                term = term * (1.0 - a)
            t = s + term
            if s >= term or s <= -term:
                comp = comp + ((s - t) + term)
            else:
                comp = comp + ((term - t) + s)
            s = t
        rows[k] = s + comp
    return out
