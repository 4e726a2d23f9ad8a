import os
import subprocess
import sys

import numpy as np
import pytest

from haltondisc._core import compiled_kernels, python_kernels

BACKENDS = [python_kernels] + ([compiled_kernels] if compiled_kernels is not None else [])
ids = [k.BACKEND for k in BACKENDS]


def brute_counts(pts, X):
    return np.array([np.count_nonzero(np.all(pts < x, axis=1)) for x in X])


def brute_rows(pts):
    # row k: diagonal term plus twice the pairs with l > k
    out = []
    for k, p in enumerate(pts):
        t = np.prod(1.0 - np.maximum(p, pts[k:]), axis=1)
        out.append(t[0] + 2.0 * t[1:].sum())
    return np.array(out)


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_count_in_boxes(k, d):
    rng = np.random.default_rng(d)
    pts = rng.random((300, d))
    pts[:100] = np.floor(pts[:100] * 8) / 8
    X = 1.0 - rng.random((500, d))
    X[:200] = np.ceil(X[:200] * 8) / 8
    got = np.asarray(k.count_in_boxes(np.ascontiguousarray(pts), np.ascontiguousarray(X), 1))
    assert np.array_equal(got, brute_counts(pts, X))


@pytest.mark.parametrize("k", BACKENDS, ids=ids)
@pytest.mark.parametrize("d", [1, 2, 4])
def test_warnock_rows(k, d):
    pts = np.random.default_rng(10 + d).random((200, d))
    got = np.asarray(k.warnock_row_sums(pts, 1))
    np.testing.assert_allclose(got, brute_rows(pts), rtol=1e-12)
    full = sum(np.prod(1.0 - np.maximum(p, pts), axis=1).sum() for p in pts)
    assert got.sum() == pytest.approx(full, rel=1e-12)


@pytest.mark.skipif(compiled_kernels is None, reason="extension not built")
def test_backends_agree_and_threads_irrelevant():
    rng = np.random.default_rng(0)
    for d in (1, 2, 3):
        pts = rng.random((1000, d))
        X = rng.random((2000, d))
        a = np.asarray(python_kernels.count_in_boxes(pts, X, 1))
        b = np.asarray(compiled_kernels.count_in_boxes(pts, X, 1))
        c = np.asarray(compiled_kernels.count_in_boxes(pts, X, 4))
        assert np.array_equal(a, b) and np.array_equal(b, c)
        r1 = np.asarray(compiled_kernels.warnock_row_sums(pts, 1))
        r4 = np.asarray(compiled_kernels.warnock_row_sums(pts, 4))
        assert np.array_equal(r1, r4)
        np.testing.assert_allclose(python_kernels.warnock_row_sums(pts, 1), r1, rtol=1e-13)


def test_empty_inputs():
    for k in BACKENDS:
        assert len(np.asarray(k.count_in_boxes(np.empty((0, 2)), np.full((3, 2), 0.5), 1))) == 3
        assert len(np.asarray(k.count_in_boxes(np.full((3, 2), 0.5), np.empty((0, 2)), 1))) == 0


def test_env_forces_fallback():
    env = dict(os.environ, HALTONDISC_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import haltondisc; print(haltondisc.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
