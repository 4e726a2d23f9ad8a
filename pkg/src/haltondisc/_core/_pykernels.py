"""Pure numpy versions of the compiled kernels (same contracts)."""

import numpy as np

BACKEND = "python"

# cap on elements of a broadcast temporary
_BLOCK = 1 << 22


def count_in_boxes(points, queries, threads=1):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    qs = np.ascontiguousarray(queries, dtype=np.float64)
    n, m = pts.shape[0], qs.shape[0]
    out = np.zeros(m, dtype=np.int64)
    if n == 0 or m == 0:
        return out
    step = max(1, _BLOCK // n)
    for lo in range(0, m, step):
        q = qs[lo:lo + step]
        inside = np.ones((q.shape[0], n), dtype=bool)
        for i in range(pts.shape[1]):
            inside &= pts[None, :, i] < q[:, None, i]
        out[lo:lo + step] = inside.sum(axis=1)
    return out


def warnock_row_sums(points, threads=1):
    b = np.ascontiguousarray(points, dtype=np.float64)
    n, d = b.shape
    out = np.zeros(n, dtype=np.float64)
    if n == 0:
        return out
    step = max(1, _BLOCK // n)
    idx = np.arange(n)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        prodm = np.ones((hi - lo, n))
        for i in range(d):
            prodm *= 1.0 - np.maximum(b[lo:hi, None, i], b[None, :, i])
        w = np.where(idx[None, :] > idx[lo:hi, None], 2.0,
                     np.where(idx[None, :] == idx[lo:hi, None], 1.0, 0.0))
        out[lo:hi] = (prodm * w).sum(axis=1)
    return out
