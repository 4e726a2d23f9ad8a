"""Counter-based uniform streams.

Sample ``j`` coordinate ``i`` is a pure function of ``(seed, j, i)``: the
SplitMix64 output at counter ``j * d + i`` of a stream keyed by the mixed
seed.  Any slicing of the index range reproduces the same values, so chunked
or parallel runs agree with serial ones.
"""

from __future__ import annotations

import numpy as np

__all__ = ["uniform", "uniform_block"]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SCALE = 2.0**-53


def _mix(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * _M1
    z = z ^ (z >> np.uint64(27))
    z = z * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed: int) -> np.uint64:
    return _mix(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]


def uniform_block(seed: int, start: int, count: int, d: int) -> np.ndarray:
    """Rows ``start .. start+count-1`` of the ``(., d)`` stream, values in ``(0, 1]``."""
    if count < 0 or d < 1:
        raise ValueError("count must be >= 0 and d >= 1")
    rows = np.arange(start, start + count, dtype=np.uint64)
    ctr = rows[:, None] * np.uint64(d) + np.arange(d, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        z = _mix(_key(seed) + (ctr + np.uint64(1)) * _GAMMA)
    return ((z >> np.uint64(11)).astype(np.float64) + 1.0) * _SCALE


def uniform(seed: int, count: int, d: int, chunk: int = 1 << 18) -> np.ndarray:
    """``count`` uniform points in ``(0, 1]^d`` for ``seed``."""
    out = np.empty((count, d))
    for lo in range(0, count, chunk):
        hi = min(count, lo + chunk)
        out[lo:hi] = uniform_block(seed, lo, hi - lo, d)
    return out
