"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--threads 1]

Prints best-of-``repeat`` wall time per kernel and size, the speedup, and
whether the two backends agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from haltondisc._core import compiled_kernels, python_kernels
from haltondisc.pointsets import halton

CASES = [
    # (kernel, dim, points, queries)
    ("count_in_boxes", 1, 4096, 200_000),
    ("count_in_boxes", 2, 4096, 200_000),
    ("count_in_boxes", 3, 4096, 50_000),
    ("warnock_row_sums", 2, 4096, None),
    ("warnock_row_sums", 4, 8192, None),
]


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, np.asarray(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)
    if compiled_kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    bases = (2, 3, 5, 7)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'d':>3}{'points':>8}{'queries':>9}{'python s':>11}{'cython s':>11}{'speedup':>9}  agree")
    for name, d, n, q in CASES:
        pts = np.ascontiguousarray(halton(bases[:d], 0, n).points)
        if q is None:
            call = lambda k: getattr(k, name)(pts, args.threads)
        else:
            X = np.ascontiguousarray(rng.random((q, d)))
            call = lambda k: getattr(k, name)(pts, X, args.threads)
        tp, a = best_of(lambda: call(python_kernels), args.repeat)
        tc, b = best_of(lambda: call(compiled_kernels), args.repeat)
        agree = np.array_equal(a, b) if q is not None else np.allclose(a, b, rtol=1e-13, atol=0)
        print(f"{name:<18}{d:>3}{n:>8}{q or '-':>9}{tp:>11.4f}{tc:>11.4f}{tp / tc:>9.1f}  {agree}")


if __name__ == "__main__":
    main()
