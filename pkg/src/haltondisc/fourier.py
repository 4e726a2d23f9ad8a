"""Exponential-sum form of the truncated Halton discrepancy.

The truncated box ``[0, [x]_n)`` splits into elementary boxes indexed by a
depth vector ``r`` and digit choices ``b``.  Each elementary box is hit by
the indices ``k = x_hat_{r,b} (mod P_r)``, which gives the integer block
count :func:`block_direct`.  Expanding the congruence indicator in additive
characters gives the closed form :func:`block_fourier`; the two must agree.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .discrepancy import BudgetExceededError, default_truncation_depth
from .pointsets import _system
from .radix import (
    BaseSystem,
    MultiRadix,
    crt_weights,
    fraction_digits,
    leading_digits,
    localize,
    localize_with_digits,
)

__all__ = [
    "FREQ_BUDGET",
    "BLOCK_BUDGET",
    "IndexRange",
    "FourierBlock",
    "nearest_int_distance",
    "e",
    "delta_fourier",
    "varphi",
    "psi",
    "block_direct",
    "block_fourier",
    "truncated_discrepancy_via_blocks",
]

FREQ_BUDGET = 10**5
BLOCK_BUDGET = 10**5

_TAU = 2.0 * math.pi


@dataclass(frozen=True)
class IndexRange:
    """Symmetric complete residue system ``[-floor((M-1)/2), floor(M/2)]``."""

    M: int
    star: bool = False

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"modulus must be >= 1, got {self.M}")

    @property
    def lo(self) -> int:
        return -((self.M - 1) // 2)

    @property
    def hi(self) -> int:
        return self.M // 2

    def array(self) -> np.ndarray:
        a = np.arange(self.lo, self.hi + 1, dtype=np.int64)
        return a[a != 0] if self.star else a

    def __iter__(self):
        return iter(int(v) for v in self.array())

    def __len__(self) -> int:
        return self.M - 1 if self.star else self.M


def nearest_int_distance(alpha: float) -> float:
    """Distance from ``alpha`` to the nearest integer."""
    f = alpha - math.floor(alpha)
    return min(f, 1.0 - f)


def e(x: float) -> complex:
    """``exp(2 pi i x)`` with ``x`` reduced mod 1 first."""
    return cmath.exp(1j * _TAU * (x - math.floor(x)))


def _e_ratio(num, den: int):
    # e(num/den) for integer num, reduced exactly before scaling
    r = np.mod(num, den) / den
    return np.exp(1j * _TAU * r)


def _fsum_complex(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def delta_fourier(a: int, M: int) -> complex:
    """``(1/M) sum_{k in I_M} e(a k / M)``: 1 if ``M | a`` else 0."""
    ks = IndexRange(M).array()
    return _fsum_complex(_e_ratio((a % M) * ks, M)) / M


def _modulus(mr) -> int:
    return mr.modulus if isinstance(mr, MultiRadix) else int(mr)


def _varphi_array(P: int, Q: int, N: int, ms: np.ndarray) -> np.ndarray:
    ms = np.asarray(ms, dtype=np.int64)
    m = np.mod(ms, P)
    if np.any(m == 0):
        raise ValueError("frequency must be nonzero mod P_r")
    num = _e_ratio(m * ((Q + N) % P), P) - _e_ratio(m * (Q % P), P)
    return num / (P * (_e_ratio(m, P) - 1.0))


def varphi(mr, Q: int, N: int, m: int) -> complex:
    """``(e(m(Q+N)/P) - e(mQ/P)) / (P (e(m/P) - 1))``, the normalised geometric sum.

    ``mr`` is a :class:`MultiRadix` or a bare modulus.
    """
    return complex(_varphi_array(_modulus(mr), Q, N, np.array([m]))[0])


def _psi_array(system: BaseSystem, mr: MultiRadix, ms: np.ndarray, top_digits: Sequence[int]) -> np.ndarray:
    out = np.ones(len(ms), dtype=complex)
    for p, M, c in zip(system.bases, mr.weights, top_digits):
        mp = np.mod(-ms * M, p)
        nz = mp != 0
        f = np.full(len(ms), complex(c))
        if np.any(nz):
            f[nz] = (1.0 - _e_ratio(-mp[nz] * c, p)) / (_e_ratio(mp[nz], p) - 1.0)
        out *= f
    return out


def _top_digits(x, mr: MultiRadix) -> tuple[int, ...]:
    # x_{i, r_i}: the r_i-th digit of coordinate i
    return tuple(
        fraction_digits(xi, p, ri)[ri - 1]
        for xi, p, ri in zip(x, mr.system.bases, mr.r)
    )


def psi(system, mr: MultiRadix, m: int, x: Sequence) -> complex:
    """``prod_i psi_i`` with reduced frequency ``m'_i = -m M_i mod p_i``.

    Factor ``i`` is the digit ``c = x_{i, r_i}`` when ``m'_i = 0`` and
    ``(1 - e(-m' c / p_i)) / (e(m' / p_i) - 1)`` otherwise.
    """
    system = _system(system)
    if any(ri < 1 for ri in mr.r):
        raise ValueError("psi needs every depth r_i >= 1")
    return complex(_psi_array(system, mr, np.array([m], dtype=np.int64), _top_digits(x, mr))[0])


@dataclass(frozen=True)
class FourierBlock:
    """One block ``D_{Q,N,r}``: indices ``Q .. Q+N-1``, depths ``r``, corner ``x``."""

    system: BaseSystem
    Q: int
    N: int
    mr: MultiRadix
    x: tuple

    @classmethod
    def build(cls, system, Q: int, N: int, r: Sequence[int], x: Sequence) -> "FourierBlock":
        system = _system(system)
        if N < 0:
            raise ValueError(f"N must be >= 0, got {N}")
        if any(int(ri) < 1 for ri in r):
            raise ValueError(f"every depth must be >= 1, got {tuple(r)}")
        if len(x) != system.s:
            raise ValueError(f"point has dimension {len(x)}, expected {system.s}")
        return cls(system, int(Q), int(N), crt_weights(system, r), tuple(x))

    @property
    def top_digits(self) -> tuple[int, ...]:
        return _top_digits(self.x, self.mr)

    @property
    def xhat(self) -> int:
        return localize(self.x, self.mr)


def _residue_count(Q: int, N: int, c: int, P: int) -> int:
    # number of k in [Q, Q+N) with k = c (mod P)
    return (Q + N - 1 - c) // P - (Q - 1 - c) // P


def block_direct(fb: FourierBlock) -> Fraction:
    """Exact block value by residue counting over the digit choices ``b``."""
    P = fb.mr.modulus
    tops = fb.top_digits
    hits = 0
    for b in itertools.product(*(range(c) for c in tops)):
        hits += _residue_count(fb.Q, fb.N, localize_with_digits(fb.x, fb.mr, b), P)
    return Fraction(hits) - Fraction(fb.N * math.prod(tops), P)


def block_fourier(fb: FourierBlock, budget: int | None = None) -> complex:
    """Block value as ``sum_{m in I*_P} varphi(m) psi(m) e(-m x_hat / P)``."""
    P = fb.mr.modulus
    budget = FREQ_BUDGET if budget is None else budget
    if P > budget:
        raise BudgetExceededError(f"P_r = {P} frequencies exceed the budget of {budget}")
    if P == 1:
        return 0j
    ms = IndexRange(P, star=True).array()
    terms = (
        _varphi_array(P, fb.Q, fb.N, ms)
        * _psi_array(fb.system, fb.mr, ms, fb.top_digits)
        * _e_ratio(-ms * fb.xhat, P)
    )
    return _fsum_complex(terms)


def truncated_discrepancy_via_blocks(
    system,
    Q: int,
    N: int,
    x: Sequence,
    depth: int | None = None,
    method: str = "fourier",
    budget: int | None = None,
) -> float:
    """Sum of the blocks over ``r in [1, n]^s``.

    Equals the local discrepancy at ``[x]_n``.  ``method`` picks the block
    evaluator: ``"fourier"`` (frequency sums) or ``"direct"`` (exact counts).
    """
    system = _system(system)
    if depth is None:
        depth = default_truncation_depth(N)
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if method not in ("fourier", "direct"):
        raise ValueError(f"unknown method {method!r}")
    nblocks = depth**system.s
    if nblocks > (BLOCK_BUDGET if budget is None else budget):
        raise BudgetExceededError(f"{nblocks} blocks exceed the block budget")
    if N == 0:
        return 0.0
    if any(xi == 1 for xi in x):
        # a full-length side drops out of the box condition
        keep = [i for i, xi in enumerate(x) if xi != 1]
        if not keep:
            return 0.0
        sub = BaseSystem(tuple(system.bases[i] for i in keep))
        return truncated_discrepancy_via_blocks(sub, Q, N, [x[i] for i in keep], depth, method, budget)
    xt = tuple(Fraction(leading_digits(xi, p, depth), p**depth) for xi, p in zip(x, system.bases))
    if method == "direct":
        total = Fraction(0)
        for r in itertools.product(range(1, depth + 1), repeat=system.s):
            total += block_direct(FourierBlock.build(system, Q, N, r, xt))
        return float(total)
    parts = []
    for r in itertools.product(range(1, depth + 1), repeat=system.s):
        fb = FourierBlock.build(system, Q, N, r, xt)
        if 0 in fb.top_digits:
            continue
        parts.append(block_fourier(fb).real)
    return math.fsum(parts)
