"""Local discrepancy and L_2 / L_p / L_inf discrepancy engines.

Boxes are anchored and half-open, ``[0, x_1) x ... x [0, x_d)``; a point
whose coordinate equals ``x_i`` is outside.  Comparisons are exact float
comparisons.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from ._core import kernels
from .pointsets import PointSet, _system
from .radix import BaseSystem, leading_digits
from .rng import uniform_block

__all__ = [
    "BudgetExceededError",
    "DiscrepancyValue",
    "PAIR_BUDGET",
    "GRID_BUDGET",
    "local_discrepancy",
    "local_discrepancy_many",
    "default_truncation_depth",
    "truncated_local_discrepancy",
    "l2_exact",
    "lp_mc",
    "linf_exact",
]

PAIR_BUDGET = int(os.environ.get("HALTONDISC_PAIR_BUDGET", 2**17))
GRID_BUDGET = int(os.environ.get("HALTONDISC_GRID_BUDGET", 10**8))

_MC_CHUNK = 1 << 15


class BudgetExceededError(RuntimeError):
    """A computation would exceed its configured size budget."""


@dataclass(frozen=True)
class DiscrepancyValue:
    """A discrepancy norm, reported both raw and divided by the point count."""

    raw: float
    normalized: float
    p: float
    method: str
    n_points: int
    stderr: float | None = None
    stderr_power_mean: float | None = None
    samples: int | None = None
    seed: int | None = None
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = "inf" if math.isinf(self.p) else self.p
        return d


def _points(P) -> np.ndarray:
    if isinstance(P, PointSet):
        return P.points
    a = np.asarray(P, dtype=np.float64)
    return a if a.ndim == 2 else a.reshape(len(a), -1)


def local_discrepancy_many(P, X, threads: int = 1) -> np.ndarray:
    """``D(x, P)`` for every row ``x`` of ``X``."""
    pts = _points(P)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != pts.shape[1]:
        raise ValueError(f"query dimension {X.shape[1]} does not match point set dimension {pts.shape[1]}")
    counts = kernels.count_in_boxes(pts, X, threads)
    return counts - pts.shape[0] * np.prod(X, axis=1)


def local_discrepancy(P, x: Sequence[float]) -> float:
    """Points in ``[0, x)`` minus ``card(P)`` times the box volume."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0) or np.any(x > 1):
        raise ValueError(f"box corner must lie in (0, 1]^d, got {x}")
    return float(local_discrepancy_many(P, x[None, :])[0])


def default_truncation_depth(N: int) -> int:
    """``floor(log2 N) + 1``."""
    return max(int(N), 1).bit_length()


def _prefix_codes(ns: np.ndarray, p: int, depth: int) -> np.ndarray:
    # first `depth` digits of phi_p(n) as the integer floor(phi_p(n) * p**depth)
    m = np.mod(ns, np.int64(p**depth))
    out = np.zeros_like(m)
    for _ in range(depth):
        out = out * p + m % p
        m = m // p
    return out


def truncated_local_discrepancy(system, Q: int, N: int, x: Sequence[float], depth: int | None = None) -> float:
    """``D([x]_n, (H_s(k))_{k=Q}^{Q+N-1})`` by exact digit comparison.

    Each coordinate of ``x`` is cut to ``depth`` digits in its own base
    (default ``floor(log2 N) + 1``).  Membership ``phi_i(k) < [x_i]_n`` is
    decided on the integer digit prefix of ``k``, so the count is exact even
    for p-adic indices whose floats are not resolvable.  A coordinate equal
    to 1 is kept as 1.
    """
    system = _system(system)
    if depth is None:
        depth = default_truncation_depth(N)
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if len(x) != system.s:
        raise ValueError(f"point has dimension {len(x)}, expected {system.s}")
    if N == 0:
        return 0.0
    for p in system.bases:
        if p**depth >= 2**62:
            raise OverflowError(f"depth {depth} too large for base {p}")
    ns = np.arange(Q, Q + N, dtype=np.int64)
    inside = np.ones(N, dtype=bool)
    vol = 1.0
    for xi, p in zip(x, system.bases):
        if not 0 < xi <= 1:
            raise ValueError(f"box corner must lie in (0, 1]^s, got {tuple(x)}")
        a = p**depth if xi == 1 else leading_digits(xi, p, depth)
        inside &= _prefix_codes(ns, p, depth) < a
        vol *= a / p**depth
    return float(np.count_nonzero(inside)) - N * vol


def l2_exact(P, budget: int | None = None, threads: int = 1) -> DiscrepancyValue:
    """Exact ``||D||_2`` by the Warnock pairwise expansion.

    ``||D||_2^2 = sum_{k,l} prod_i (1 - max(b_ki, b_li))
    - 2**(1-d) M sum_k prod_i (1 - b_ki**2) + M**2 3**-d``.
    """
    t0 = time.perf_counter()
    pts = _points(P)
    M, d = pts.shape
    budget = PAIR_BUDGET if budget is None else budget
    if M > budget:
        raise BudgetExceededError(f"{M} points exceed the pair budget of {budget}")
    if M == 0:
        return DiscrepancyValue(0.0, 0.0, 2.0, "exact", 0, elapsed=time.perf_counter() - t0)
    pair = math.fsum(kernels.warnock_row_sums(pts, threads))
    single = math.fsum(np.prod(1.0 - pts * pts, axis=1))
    sq = math.fsum([pair, -(2.0 ** (1 - d)) * M * single, M * M / 3.0**d])
    raw = math.sqrt(max(sq, 0.0))
    return DiscrepancyValue(raw, raw / M, 2.0, "exact", M, elapsed=time.perf_counter() - t0)


def lp_mc(P, p: float, M: int, seed: int, threads: int = 1) -> DiscrepancyValue:
    """Monte Carlo ``(E|D(U)|^p)^(1/p)`` over ``M`` seeded uniform ``U``.

    ``stderr`` is the delta-method error of the norm; ``stderr_power_mean``
    the plain standard error of the ``p``-th power mean.
    """
    t0 = time.perf_counter()
    p = float(p)
    if not p > 0 or math.isinf(p) or math.isnan(p):
        raise ValueError(f"p must be a finite positive number, got {p}")
    if M < 2:
        raise ValueError(f"need at least 2 samples, got {M}")
    pts = _points(P)
    n, d = pts.shape
    vals = np.empty(M)
    for lo in range(0, M, _MC_CHUNK):
        hi = min(M, lo + _MC_CHUNK)
        vals[lo:hi] = np.abs(local_discrepancy_many(pts, uniform_block(seed, lo, hi - lo, d), threads)) ** p
    mean = math.fsum(vals) / M
    se_mean = float(np.std(vals, ddof=1)) / math.sqrt(M)
    est = mean ** (1.0 / p)
    se = (mean ** (1.0 / p - 1.0) * se_mean / p) if mean > 0 else 0.0
    return DiscrepancyValue(
        est, est / n if n else 0.0, p, "monte-carlo", n,
        stderr=se, stderr_power_mean=se_mean, samples=M, seed=seed,
        elapsed=time.perf_counter() - t0,
    )


def linf_exact(P, budget: int | None = None) -> DiscrepancyValue:
    """Exact ``sup |D(x)|`` over ``x`` in ``(0, 1]^d``.

    The candidate grid is every point coordinate plus 1 in each axis.  At a
    grid corner the closed-box count gives the right limit and the
    open-box count the left limit; together they attain the supremum.
    Points with a coordinate equal to 1 never enter a box.
    """
    t0 = time.perf_counter()
    pts = _points(P)
    M, d = pts.shape
    if M == 0:
        return DiscrepancyValue(0.0, 0.0, math.inf, "exact", 0, elapsed=time.perf_counter() - t0)
    budget = GRID_BUDGET if budget is None else budget
    if (M + 1) ** d > budget:
        raise BudgetExceededError(f"grid of {(M + 1) ** d} candidates exceeds the budget of {budget}")
    keep = np.all(pts < 1.0, axis=1)
    inner = pts[keep]
    grids = [np.union1d(inner[:, i], [1.0]) for i in range(d)]
    shape = tuple(len(g) for g in grids)
    hist = np.zeros(shape, dtype=np.int64)
    idx = tuple(np.searchsorted(grids[i], inner[:, i]) for i in range(d))
    np.add.at(hist, idx, 1)
    closed = hist
    for ax in range(d):
        closed = np.cumsum(closed, axis=ax)
    opened = np.pad(closed, [(1, 0)] * d)[tuple(slice(0, n) for n in shape)]
    vol = np.ones(shape)
    for i, g in enumerate(grids):
        vol = vol * g.reshape([-1 if j == i else 1 for j in range(d)])
    excess = float(np.max(closed - M * vol))
    deficit = float(np.max(M * vol - opened))
    sup = max(excess, deficit, 0.0)
    return DiscrepancyValue(sup, sup / M, math.inf, "exact", M, elapsed=time.perf_counter() - t0)
