"""Halton, Hammersley and symmetrized Hammersley point sets.

Coordinates are the correctly rounded floats of exact base-``p`` rationals,
so equal rationals always map to equal floats and order is preserved.
Negative indices use ``p``-adic digits truncated at :func:`default_depth`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .radix import BaseSystem, default_depth, ratio_to_float

__all__ = [
    "PointSet",
    "DigitPermutationFamily",
    "radical_inverse_array",
    "halton",
    "iter_halton",
    "hammersley",
    "hammersley_sym",
    "hammersley_sym_dot",
    "generalized_halton",
    "make_pointset",
    "VARIANTS",
    "expected_count",
]

VARIANTS = ("halton", "hammersley", "hammersley_sym", "hammersley_sym_dot", "generalized_halton")

_EXACT = 2**53
_INT64 = 2**63


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite point set with provenance.

    ``points`` is an ``(n, d)`` read-only float64 array.
    """

    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            # a flat list is a one-dimensional set
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-d array, got shape {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __iter__(self):
        return iter(map(tuple, self.points.tolist()))


def _system(system) -> BaseSystem:
    return system if isinstance(system, BaseSystem) else BaseSystem(system)


def radical_inverse_array(ns, p: int, K: int | None = None, perm=None) -> np.ndarray:
    """Vectorised radical inverse of integer indices ``ns`` in base ``p``.

    ``perm`` is an optional ``(K, p)`` integer table; digit ``j`` is replaced
    by ``perm[j][digit]`` before mirroring.
    """
    if K is None:
        K = default_depth(p)
    ns = np.asarray(ns)
    if ns.size == 0:
        return np.zeros(0)
    lo, hi = int(ns.min()), int(ns.max())
    if perm is None and lo >= 0:
        L = max(1, len(_int_digits(hi, p)))
        L = min(L, K)
    else:
        L = K
    pL = p**L
    if pL >= _INT64 or abs(lo) >= _INT64 or abs(hi) >= _INT64:
        return np.array([_ri_python(int(n), p, L, perm) for n in ns.ravel()]).reshape(ns.shape)
    m = np.mod(ns.astype(np.int64), np.int64(pL))
    R = np.zeros_like(m)
    for j in range(L):
        e = m % p
        m //= p
        if perm is not None:
            e = np.asarray(perm[j], dtype=np.int64)[e]
        R = R * p + e
    if pL <= _EXACT:
        v = R.astype(np.float64) / float(pL)
        return np.minimum(v, np.nextafter(1.0, 0.0))
    return np.array([ratio_to_float(int(r), pL) for r in R.ravel()]).reshape(ns.shape)


def _int_digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        n, e = divmod(n, p)
        out.append(e)
    return out


def _ri_python(n: int, p: int, L: int, perm) -> float:
    m = n % p**L
    R = 0
    for j in range(L):
        m, e = divmod(m, p)
        if perm is not None:
            e = int(perm[j][e])
        R = R * p + e
    return ratio_to_float(R, p**L)


def _halton_block(system: BaseSystem, ns: np.ndarray, perms=None) -> np.ndarray:
    cols = []
    for i, p in enumerate(system.bases):
        perm = None if perms is None else perms.table(i)
        cols.append(radical_inverse_array(ns, p, system.depths[i], perm))
    return np.stack(cols, axis=1) if cols else np.zeros((len(ns), 0))


def halton(system, Q: int = 0, N: int = 0) -> PointSet:
    """Halton points ``H_s(Q), ..., H_s(Q + N - 1)``; ``Q`` may be negative."""
    system = _system(system)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    ns = np.arange(Q, Q + N, dtype=object if abs(Q) + N >= _INT64 else np.int64)
    pts = _halton_block(system, ns) if N else np.zeros((0, system.s))
    return PointSet(pts, _prov("halton", system, Q=Q, N=N))


def iter_halton(system, Q: int = 0, N: int = 0, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Yield the Halton segment in row blocks; values equal :func:`halton`'s."""
    system = _system(system)
    for lo in range(Q, Q + N, chunk):
        hi = min(Q + N, lo + chunk)
        yield _halton_block(system, np.arange(lo, hi, dtype=np.int64))


def hammersley(system, N: int) -> PointSet:
    """``(H_s(n), n/N)`` for ``n = 0 .. N-1``."""
    system = _system(system)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    ns = np.arange(N, dtype=np.int64)
    pts = np.column_stack([_halton_block(system, ns), ns / N])
    return PointSet(pts, _prov("hammersley", system, Q=0, N=N))


def hammersley_sym(system, N: int) -> PointSet:
    """``(H_s(n), |n|/N)`` for ``-N < n < N``, negative ``n`` read p-adically."""
    system = _system(system)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    ns = np.arange(-(N - 1), N, dtype=np.int64)
    pts = np.column_stack([_halton_block(system, ns), np.abs(ns) / N])
    return PointSet(pts, _prov("hammersley_sym", system, Q=-(N - 1), N=N))


def hammersley_sym_dot(system, N: int) -> PointSet:
    """Sign-bit reflected Hammersley set with ``2**s * N`` points.

    Index ``n = m_1 + 2 m_2 + ... + 2**(s-1) m_s + 2**s m``; coordinate ``i``
    is ``phi_i(m)`` or ``1 - phi_i(m)`` as ``m_i`` is 0 or 1.  The reflected
    coordinate is exactly 1.0 when ``m = 0``, so this set lives in ``[0, 1]``.
    """
    system = _system(system)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    s = system.s
    total = (1 << s) * N
    n = np.arange(total, dtype=np.int64)
    base = _halton_block(system, n >> s)
    bits = (n[:, None] >> np.arange(s)[None, :]) & 1
    coords = np.where(bits == 1, 1.0 - base, base)
    pts = np.column_stack([coords, n / total])
    return PointSet(pts, _prov("hammersley_sym_dot", system, Q=0, N=N))


class DigitPermutationFamily:
    """Bijections ``pi_{i,j}`` of ``{0, .., p_i - 1}`` per base and digit position.

    Positions not listed default to the identity.
    """

    def __init__(self, system, perms: Sequence[Sequence[Sequence[int]]] | None = None, ident: str = "custom"):
        self.system = _system(system)
        self.ident = ident
        perms = perms if perms is not None else [[] for _ in self.system.bases]
        if len(perms) != self.system.s:
            raise ValueError(f"need one permutation list per base ({self.system.s})")
        tables = []
        for p, K, plist in zip(self.system.bases, self.system.depths, perms):
            if len(plist) > K:
                raise ValueError(f"at most {K} digit positions for base {p}")
            t = np.tile(np.arange(p, dtype=np.int64), (K, 1))
            for j, pi in enumerate(plist):
                pi = np.asarray(pi, dtype=np.int64)
                if pi.shape != (p,) or not np.array_equal(np.sort(pi), np.arange(p)):
                    raise ValueError(f"permutation {list(pi)} is not a bijection of range({p})")
                t[j] = pi
            t.setflags(write=False)
            tables.append(t)
        self._tables = tables

    @classmethod
    def identity(cls, system) -> "DigitPermutationFamily":
        return cls(system, None, ident="identity")

    @classmethod
    def random(cls, system, seed: int) -> "DigitPermutationFamily":
        system = _system(system)
        rng = np.random.default_rng(seed)
        perms = [[rng.permutation(p) for _ in range(K)] for p, K in zip(system.bases, system.depths)]
        return cls(system, perms, ident=f"random:{seed}")

    def table(self, i: int) -> np.ndarray:
        return self._tables[i]

    def is_identity(self) -> bool:
        return all(np.array_equal(t, np.tile(np.arange(t.shape[1]), (t.shape[0], 1))) for t in self._tables)


def generalized_halton(system, perms: DigitPermutationFamily, Q: int = 0, N: int = 0) -> PointSet:
    """Halton with digit ``e_{i,j}`` replaced by ``pi_{i,j}(e_{i,j})``."""
    system = _system(system)
    if perms.system != system:
        raise ValueError("permutation family was built for a different base system")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    ns = np.arange(Q, Q + N, dtype=np.int64)
    if perms.is_identity():
        pts = _halton_block(system, ns) if N else np.zeros((0, system.s))
    else:
        pts = _halton_block(system, ns, perms) if N else np.zeros((0, system.s))
    return PointSet(pts, _prov("generalized_halton", system, Q=Q, N=N, permutation=perms.ident))


def expected_count(variant: str, s: int, N: int) -> int:
    return {
        "halton": N,
        "generalized_halton": N,
        "hammersley": N,
        "hammersley_sym": 2 * N - 1,
        "hammersley_sym_dot": (1 << s) * N,
    }[variant]


def make_pointset(variant: str, system, N: int, Q: int = 0, perms=None) -> PointSet:
    """Dispatch on a variant name (dashes or underscores)."""
    v = variant.replace("-", "_")
    if v == "halton":
        return halton(system, Q, N)
    if v == "hammersley":
        return hammersley(system, N)
    if v == "hammersley_sym":
        return hammersley_sym(system, N)
    if v == "hammersley_sym_dot":
        return hammersley_sym_dot(system, N)
    if v == "generalized_halton":
        return generalized_halton(system, perms or DigitPermutationFamily.identity(system), Q, N)
    raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")


def _prov(variant, system, **kw) -> dict:
    out = {"variant": variant, "bases": list(system.bases)}
    out.update(kw)
    return out
