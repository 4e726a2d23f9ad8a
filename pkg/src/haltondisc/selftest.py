"""Seeded oracle batteries for the radix and Fourier layers."""

from __future__ import annotations

import math
import time

import numpy as np

from .discrepancy import truncated_local_discrepancy
from .fourier import FourierBlock, block_direct, block_fourier, truncated_discrepancy_via_blocks
from .radix import BaseSystem, crt_weights, localize, radical_inverse

__all__ = [
    "BLOCK_SYSTEMS",
    "depth_vectors",
    "crt_roundtrip",
    "random_block_cases",
    "random_truncation_cases",
    "block_battery",
    "truncation_battery",
    "run_selftest",
]

BLOCK_SYSTEMS = ((2, 3), (2, 5), (3, 5), (2, 3, 5), (2, 3, 7))

# (bases, largest N) keeping every block modulus inside the frequency budget
_TRUNCATION_SYSTEMS = (((2, 3), 31), ((2, 5), 31), ((2, 3, 5), 7))


def depth_vectors(system: BaseSystem, limit: int, min_depth: int = 0):
    """All depth vectors with every ``r_i >= min_depth`` and ``P_r <= limit``."""

    def rec(i, acc, P):
        if i == system.s:
            yield tuple(acc)
            return
        p = system.bases[i]
        r, q = min_depth, p**min_depth
        while P * q <= limit:
            yield from rec(i + 1, acc + [r], P * q)
            r += 1
            q *= p

    yield from rec(0, [], 1)


def crt_roundtrip(bases=(2, 3), limit: int = 5000) -> dict:
    """Check ``localize(H_s(k)) == k mod P_r`` for every ``k < P_r``, every ``r``."""
    system = BaseSystem(bases)
    checked = failures = vectors = 0
    for r in depth_vectors(system, limit):
        mr = crt_weights(system, r)
        vectors += 1
        for k in range(mr.modulus):
            x = [radical_inverse(k, p, max(ri, 1), exact=True) for p, ri in zip(system.bases, r)]
            if localize(x, mr) != k % mr.modulus:
                failures += 1
            checked += 1
    return {"bases": list(bases), "limit": limit, "depth_vectors": vectors, "checked": checked, "failures": failures}


def random_block_cases(seed: int, count: int = 200, max_modulus: int = 4096):
    """Seeded ``(system, Q, N, r, x)`` with all ``r_i >= 1`` and ``P_r <= max_modulus``."""
    rng = np.random.default_rng(seed)
    vecs = {b: list(depth_vectors(BaseSystem(b), max_modulus, 1)) for b in BLOCK_SYSTEMS}
    out = []
    for _ in range(count):
        bases = BLOCK_SYSTEMS[rng.integers(len(BLOCK_SYSTEMS))]
        rs = vecs[bases]
        r = rs[rng.integers(len(rs))]
        P = math.prod(p**ri for p, ri in zip(bases, r))
        Q = int(rng.integers(-10**6, 10**6))
        N = int(rng.integers(0, 3 * P + 1))
        x = tuple(float(v) for v in rng.random(len(bases)))
        out.append((bases, Q, N, r, x))
    return out


def random_truncation_cases(seed: int, count: int = 50):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        bases, nmax = _TRUNCATION_SYSTEMS[rng.integers(len(_TRUNCATION_SYSTEMS))]
        Q = int(rng.integers(-1000, 1000))
        N = int(rng.integers(1, nmax + 1))
        x = tuple(float(v) for v in 1.0 - rng.random(len(bases)))
        out.append((bases, Q, N, x))
    return out


def block_battery(seed: int = 0, count: int = 200, max_modulus: int = 4096) -> dict:
    worst = 0.0
    worst_imag = 0.0
    for bases, Q, N, r, x in random_block_cases(seed, count, max_modulus):
        fb = FourierBlock.build(bases, Q, N, r, x)
        exact = block_direct(fb)
        z = block_fourier(fb)
        worst = max(worst, abs(z.real - float(exact)))
        worst_imag = max(worst_imag, abs(z.imag))
    return {"cases": count, "max_abs_error": worst, "max_abs_imag": worst_imag}


def truncation_battery(seed: int = 0, count: int = 50) -> dict:
    worst = 0.0
    for bases, Q, N, x in random_truncation_cases(seed, count):
        a = truncated_discrepancy_via_blocks(bases, Q, N, x)
        b = truncated_local_discrepancy(bases, Q, N, x)
        worst = max(worst, abs(a - b))
    return {"cases": count, "max_abs_error": worst}


def run_selftest(seed: int = 0, cases: int = 200, block_cases: int = 50, tolerance: float = 1e-9) -> dict:
    """Run all batteries and report whether every error is within ``tolerance``."""
    t0 = time.perf_counter()
    crt = crt_roundtrip()
    blocks = block_battery(seed, cases)
    trunc = truncation_battery(seed, block_cases)
    passed = (
        crt["failures"] == 0
        and blocks["max_abs_error"] < tolerance
        and blocks["max_abs_imag"] < tolerance
        and trunc["max_abs_error"] < tolerance
    )
    return {
        "seed": seed,
        "tolerance": tolerance,
        "crt_roundtrip": crt,
        "block_equivalence": blocks,
        "block_reconstruction": trunc,
        "passed": bool(passed),
        "elapsed": time.perf_counter() - t0,
    }
