"""Empirical checks of the L_p scaling, CLT and L_p ratio limits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .discrepancy import l2_exact, local_discrepancy_many, lp_mc
from .pointsets import _system, halton, make_pointset
from .rng import uniform_block

__all__ = [
    "SampleSet",
    "MomentRow",
    "MomentReport",
    "ScalingRow",
    "RatioRow",
    "kappa",
    "gaussian_moment",
    "clt_samples",
    "moment_report",
    "shape_summary",
    "ks_normal",
    "scaling_table",
    "ratio_table",
    "CLT_VARIANTS",
]

CLT_VARIANTS = ("hammersley", "hammersley_sym", "hammersley_sym_dot")

_CHUNK = 1 << 15


def kappa(p: float) -> float:
    """``E|Z|^p`` for a standard normal ``Z``.

    Even integers use ``(2r)! / (2^r r!)``; anything else is integrated
    numerically over ``[0, inf)``.
    """
    p = float(p)
    if not p > 0 or math.isinf(p) or math.isnan(p):
        raise ValueError(f"p must be a finite positive number, got {p}")
    if p.is_integer() and int(p) % 2 == 0:
        r = int(p) // 2
        return float(math.factorial(2 * r) // (2**r * math.factorial(r)))
    val, _ = integrate.quad(
        lambda u: u**p * math.exp(-0.5 * u * u), 0.0, math.inf, epsabs=0.0, epsrel=1e-12, limit=200
    )
    return 2.0 * val / math.sqrt(2.0 * math.pi)


def gaussian_moment(h: int) -> float:
    """``E Z^h``: ``h! / (2^(h/2) (h/2)!)`` for even ``h``, 0 for odd."""
    if h < 0:
        raise ValueError(f"moment order must be >= 0, got {h}")
    if h % 2:
        return 0.0
    q = h // 2
    return float(math.factorial(h) // (2**q * math.factorial(q)))


@dataclass
class SampleSet:
    """Normalised local discrepancies ``Y = D(x) / ||D||_2`` at uniform ``x``."""

    values: np.ndarray
    variant: str
    bases: tuple[int, ...]
    N: int
    seed: int
    norm_l2: float
    n_points: int
    raw: np.ndarray = field(repr=False, default=None)

    @property
    def M(self) -> int:
        return len(self.values)

    def provenance(self) -> dict:
        return {
            "variant": self.variant,
            "bases": list(self.bases),
            "N": self.N,
            "M": self.M,
            "seed": self.seed,
            "n_points": self.n_points,
            "norm_l2_raw": self.norm_l2,
        }


def clt_samples(variant: str, system, N: int, M: int, seed: int, threads: int = 1) -> SampleSet:
    """Draw ``M`` uniform ``x`` in ``(0, 1]^(s+1)`` and normalise ``D(x)`` by the exact L_2 norm."""
    v = variant.replace("-", "_")
    if v not in CLT_VARIANTS:
        raise ValueError(f"variant must be one of {CLT_VARIANTS}, got {variant!r}")
    system = _system(system)
    P = make_pointset(v, system, N)
    norm = l2_exact(P, threads=threads).raw
    d = P.dim
    raw = np.empty(M)
    for lo in range(0, M, _CHUNK):
        hi = min(M, lo + _CHUNK)
        raw[lo:hi] = local_discrepancy_many(P, uniform_block(seed, lo, hi - lo, d), threads)
    return SampleSet(raw / norm, v, system.bases, N, seed, norm, len(P), raw)


@dataclass(frozen=True)
class MomentRow:
    h: int
    empirical: float
    target: float
    deviation: float
    stderr: float


@dataclass(frozen=True)
class MomentReport:
    rows: tuple[MomentRow, ...]

    def to_dict(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows]}

    def __getitem__(self, h: int) -> MomentRow:
        for r in self.rows:
            if r.h == h:
                return r
        raise KeyError(h)


def _values(S) -> np.ndarray:
    return np.asarray(S.values if isinstance(S, SampleSet) else S, dtype=np.float64)


def moment_report(S, h_max: int = 6) -> MomentReport:
    """Raw moments ``mean(Y^h)`` against Gaussian targets with jackknife errors."""
    if h_max < 2:
        raise ValueError(f"h_max must be >= 2, got {h_max}")
    y = _values(S)
    M = len(y)
    rows = []
    for h in range(1, h_max + 1):
        yh = y**h
        total = math.fsum(yh)
        est = total / M
        # leave-one-out means
        loo = (total - yh) / (M - 1)
        se = math.sqrt((M - 1) / M * float(np.sum((loo - loo.mean()) ** 2)))
        target = gaussian_moment(h)
        rows.append(MomentRow(h, est, target, abs(est - target), se))
    return MomentReport(tuple(rows))


def shape_summary(S) -> dict:
    """Sample mean, variance, skewness and (non-excess) kurtosis of ``Y``."""
    y = _values(S)
    mu = float(np.mean(y))
    c = y - mu
    m2 = float(np.mean(c**2))
    return {
        "mean": mu,
        "var": m2,
        "skewness": float(np.mean(c**3)) / m2**1.5,
        "kurtosis": float(np.mean(c**4)) / m2**2,
    }


def ks_normal(S) -> float:
    """Kolmogorov-Smirnov distance to the standard normal CDF.

    ``Phi`` is ``scipy.special.ndtr`` (double precision, error far below 1e-7).
    """
    y = np.sort(_values(S))
    M = len(y)
    if M < 1:
        raise ValueError("empty sample")
    F = special.ndtr(y)
    j = np.arange(1, M + 1)
    return float(max(np.max(j / M - F), np.max(F - (j - 1) / M)))


@dataclass(frozen=True)
class ScalingRow:
    N: int
    n: int
    raw: float
    normalized: float
    statistic: float
    method: str
    stderr: float | None = None


def scaling_table(
    system, p: float, Ns: Sequence[int], Q: int = 0, M: int = 100_000, seed: int = 0, threads: int = 1
) -> list[ScalingRow]:
    """``||D||_p / (ln N)^(s/2)`` for Halton segments ``Q .. Q+N-1``.

    ``p = 2`` is exact; other orders use Monte Carlo with ``M`` samples.
    """
    system = _system(system)
    rows = []
    for N in Ns:
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        P = halton(system, Q, N)
        if float(p) == 2.0:
            dv = l2_exact(P, threads=threads)
        else:
            dv = lp_mc(P, p, M, seed, threads)
        stat = dv.raw / math.log(N) ** (system.s / 2)
        rows.append(ScalingRow(N, int(N).bit_length(), dv.raw, dv.normalized, stat, dv.method, dv.stderr))
    return rows


@dataclass(frozen=True)
class RatioRow:
    N: int
    p: float
    ratio: float
    target: float
    deviation: float
    stderr: float


def ratio_table(
    variant: str, system, p: float, Ns: Sequence[int], M: int, seed: int, threads: int = 1
) -> list[RatioRow]:
    """``||D||_p / ||D||_2`` against ``kappa(p)^(1/p)``.

    The numerator reuses the CLT sample stream (same seed, same ``x``), the
    denominator is the exact L_2 norm.  The ratio does not depend on how
    the norms are normalised.
    """
    p = float(p)
    v = variant.replace("-", "_")
    if v not in CLT_VARIANTS:
        raise ValueError(f"variant must be one of {CLT_VARIANTS}, got {variant!r}")
    system = _system(system)
    target = kappa(p) ** (1.0 / p)
    rows = []
    for N in Ns:
        P = make_pointset(v, system, N)
        norm = l2_exact(P, threads=threads).raw
        num = lp_mc(P, p, M, seed, threads)
        ratio = num.raw / norm
        rows.append(RatioRow(N, p, ratio, target, ratio - target, num.stderr / norm))
    return rows
