"""Digit expansions in coprime bases, radical inverses and CRT localization.

Points produced by this package are binary floats, but every quantity that
depends on digits (truncation, localization) is computed in exact integer
arithmetic.  A float coordinate is read at depth ``r`` in base ``p`` as the
``r``-digit fraction it is the correctly rounded image of, when such a
fraction exists; otherwise its exact binary value is truncated.  This keeps
``1/3`` meaning one third in base 3 even though ``float(1/3) < 1/3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence, Union

import numpy as np

__all__ = [
    "MODULUS_LIMIT",
    "ModulusOverflowError",
    "BaseSystem",
    "DigitVector",
    "MultiRadix",
    "default_depth",
    "digits",
    "radical_inverse",
    "ratio_to_float",
    "leading_digits",
    "fraction_digits",
    "truncate_fraction",
    "crt_weights",
    "localize",
    "localize_with_digits",
]

#: Moduli must stay strictly below this bound.
MODULUS_LIMIT = 2**63

#: Largest float strictly below one.
ONE_MINUS_ULP = float(np.nextafter(1.0, 0.0))

Real = Union[float, Fraction, int]


class ModulusOverflowError(OverflowError):
    """A CRT modulus reached the supported integer width."""


def default_depth(p: int) -> int:
    """Smallest ``K`` with ``p**K >= 2**53``, i.e. ``ceil(53 / log2(p))``."""
    if p < 2:
        raise ValueError(f"base must be >= 2, got {p}")
    k, v = 0, 1
    while v < 2**53:
        v *= p
        k += 1
    return k


@dataclass(frozen=True)
class BaseSystem:
    """Pairwise coprime bases ``p_1, ..., p_s``."""

    bases: tuple[int, ...]

    def __init__(self, bases: Sequence[int]):
        bases = tuple(int(b) for b in bases)
        if not bases:
            raise ValueError("a base system needs at least one base")
        for b in bases:
            if b < 2:
                raise ValueError(f"every base must be >= 2, got {b}")
        for i, a in enumerate(bases):
            for b in bases[i + 1:]:
                if gcd(a, b) != 1:
                    raise ValueError(
                        f"bases must be pairwise coprime: gcd({a}, {b}) = {gcd(a, b)}"
                    )
        object.__setattr__(self, "bases", bases)

    @property
    def s(self) -> int:
        return len(self.bases)

    @property
    def p0(self) -> int:
        return prod(self.bases)

    @property
    def depths(self) -> tuple[int, ...]:
        return tuple(default_depth(p) for p in self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __len__(self) -> int:
        return len(self.bases)


@dataclass(frozen=True)
class DigitVector:
    """Base-``p`` digits ``e_1, ..., e_K``, least significant first."""

    p: int
    digits: tuple[int, ...]

    def __post_init__(self):
        for e in self.digits:
            if not 0 <= e < self.p:
                raise ValueError(f"digit {e} out of range for base {self.p}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def value(self) -> int:
        """``sum e_j p**(j-1)``, the represented residue mod ``p**K``."""
        return sum(e * self.p**j for j, e in enumerate(self.digits))

    def __iter__(self):
        return iter(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, j):
        return self.digits[j]


def digits(n: int, p: int, K: int) -> DigitVector:
    """First ``K`` digits of the ``p``-adic expansion of ``n``.

    Negative ``n`` is expanded ``p``-adically, so ``-1`` has every digit
    equal to ``p - 1``.
    """
    if p < 2:
        raise ValueError(f"base must be >= 2, got {p}")
    if K < 0:
        raise ValueError(f"depth must be >= 0, got {K}")
    m = int(n) % p**K
    out = []
    for _ in range(K):
        m, e = divmod(m, p)
        out.append(e)
    return DigitVector(p, tuple(out))


def ratio_to_float(num: int, den: int) -> float:
    """Correctly rounded ``num / den`` clamped into ``[0, 1)``."""
    v = num / den
    return ONE_MINUS_ULP if v >= 1.0 else v


def radical_inverse(n: int, p: int, K: int | None = None, exact: bool = False) -> Real:
    """Mirror the first ``K`` base-``p`` digits of ``n`` across the radix point.

    Returns the correctly rounded float of the exact rational, or the
    rational itself when ``exact`` is true.  Values always lie in ``[0, 1)``.
    """
    if K is None:
        K = default_depth(p)
    if K < 1:
        raise ValueError(f"depth must be >= 1, got {K}")
    R = 0
    for e in digits(n, p, K):
        R = R * p + e
    if exact:
        return Fraction(R, p**K)
    return ratio_to_float(R, p**K)


def leading_digits(x: Real, p: int, r: int) -> int:
    """Integer ``a`` with ``[x]_r = a / p**r`` (first ``r`` digits of ``x``).

    Fractions are read exactly.  A float is read as the ``r``-digit fraction
    it rounds from when there is one, else by its exact binary value.
    """
    if r < 0:
        raise ValueError(f"depth must be >= 0, got {r}")
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
    else:
        num, den = float(x).as_integer_ratio()
    if num < 0 or num >= den:
        raise ValueError(f"coordinate must lie in [0, 1), got {x}")
    scale = p**r
    t = num * scale
    floor_a = t // den
    if isinstance(x, Fraction) or t == floor_a * den:
        return floor_a
    c = (2 * t + den) // (2 * den)
    if c < scale and c / scale == x:
        return c
    return floor_a


def fraction_digits(x: Real, p: int, r: int) -> DigitVector:
    """Digits ``x_1, ..., x_r`` of ``x = 0.x_1 x_2 ...`` in base ``p``.

    Note the ordering: index 0 holds ``x_1``, the most significant digit.
    """
    a = leading_digits(x, p, r)
    out = []
    for _ in range(r):
        a, e = divmod(a, p)
        out.append(e)
    return DigitVector(p, tuple(reversed(out)))


def truncate_fraction(x: Real, p: int, r: int) -> Real:
    """Keep the first ``r`` base-``p`` digits of ``x``."""
    a = leading_digits(x, p, r)
    if isinstance(x, Fraction):
        return Fraction(a, p**r)
    return a / p**r


@dataclass(frozen=True)
class MultiRadix:
    """Depth vector ``r`` with modulus ``P_r`` and CRT weights ``M_i``."""

    system: BaseSystem
    r: tuple[int, ...]
    modulus: int
    weights: tuple[int, ...]
    cofactors: tuple[int, ...] = field(repr=False)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**ri for p, ri in zip(self.system.bases, self.r))


def crt_weights(system: BaseSystem, r: Sequence[int]) -> MultiRadix:
    """CRT data for depths ``r``: ``M_i = (P_r / p_i**r_i)**-1 mod p_i**r_i``."""
    r = tuple(int(v) for v in r)
    if len(r) != system.s:
        raise ValueError(f"need {system.s} depths, got {len(r)}")
    if any(v < 0 for v in r):
        raise ValueError(f"depths must be >= 0, got {r}")
    P = prod(p**ri for p, ri in zip(system.bases, r))
    if P >= MODULUS_LIMIT:
        raise ModulusOverflowError(f"modulus P_r = {P} exceeds 2**63 for r = {r}")
    weights, cofactors = [], []
    for p, ri in zip(system.bases, r):
        q = p**ri
        co = P // q
        cofactors.append(co)
        weights.append(pow(co, -1, q) if ri >= 1 else 0)
    return MultiRadix(system, r, P, tuple(weights), tuple(cofactors))


def _reversed_prefix(x: Real, p: int, r: int) -> int:
    # hat x_r = sum_{j<=r} x_j p^(j-1): the r leading digits read backwards
    a = leading_digits(x, p, r)
    out = 0
    for _ in range(r):
        a, e = divmod(a, p)
        out = out * p + e
    return out


def localize(x: Sequence[Real], mr: MultiRadix) -> int:
    """Residue ``k mod P_r`` of the indices whose Halton point shares ``[x]_r``."""
    bases = mr.system.bases
    if len(x) != len(bases):
        raise ValueError(f"point has dimension {len(x)}, expected {len(bases)}")
    total = 0
    for xi, p, ri, M, co in zip(x, bases, mr.r, mr.weights, mr.cofactors):
        if ri:
            total += M * co * _reversed_prefix(xi, p, ri)
    return total % mr.modulus


def localize_with_digits(x: Sequence[Real], mr: MultiRadix, b: Sequence[int]) -> int:
    """As :func:`localize`, with the ``r_i``-th digit of coordinate ``i`` replaced by ``b_i``."""
    bases = mr.system.bases
    if len(x) != len(bases) or len(b) != len(bases):
        raise ValueError("point, digit overrides and base system differ in dimension")
    total = 0
    for xi, bi, p, ri, M, co in zip(x, b, bases, mr.r, mr.weights, mr.cofactors):
        if ri < 1:
            raise ValueError("digit overrides need every depth r_i >= 1")
        if not 0 <= bi < p:
            raise ValueError(f"digit override {bi} out of range for base {p}")
        low = _reversed_prefix(xi, p, ri) % p ** (ri - 1)
        total += M * co * (low + bi * p ** (ri - 1))
    return total % mr.modulus
