"""Exact residue arithmetic modulo a prime.

Provides deterministic primality testing, smallest primitive roots,
a full discrete-log (index) table per prime, and monomial evaluation
with positive or negative exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    NotInvertibleError,
    NotPrimeError,
    TooLargeError,
    ZeroCoordinateError,
    ZeroToNegativePowerError,
)

MAX_MODULUS = 2**31  # keeps a*b < 2^62 in 64-bit intermediates

# Deterministic Miller-Rabin witness set for all m < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1 << 16


def is_prime(m: int) -> bool:
    """Deterministic primality test for 0 <= m < 2^63."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    # Trial division catches everything below 2^32.
    d = 3
    limit = min(math.isqrt(m), _TRIAL_LIMIT)
    while d <= limit:
        if m % d == 0:
            return False
        d += 2
    if math.isqrt(m) <= _TRIAL_LIMIT:
        return True
    # Larger inputs: fixed-witness Miller-Rabin, deterministic in range.
    r, s = m - 1, 0
    while r % 2 == 0:
        r //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, r, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def pow_mod(a: int, e: int, p: int) -> int:
    """a^e mod p; a negative e raises the modular inverse to |e|."""
    a %= p
    if e < 0:
        if a == 0:
            raise ZeroToNegativePowerError(f"0^{e} mod {p} is undefined")
        return pow(pow(a, -1, p), -e, p)
    return pow(a, e, p)


def inv_mod(a: int, p: int) -> int:
    """Multiplicative inverse of a mod p."""
    a %= p
    if a == 0:
        raise NotInvertibleError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def _prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m by trial division."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


def primitive_root(p: int) -> int:
    """Smallest positive primitive root modulo a prime p."""
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    exps = [(p - 1) // q for q in factors]
    g = 2
    while True:
        if all(pow(g, e, p) != 1 for e in exps):
            return g
        g += 1


@dataclass(frozen=True)
class ExponentVector:
    """A vector of nonzero integer exponents."""

    e: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "e", tuple(int(v) for v in self.e))
        if len(self.e) < 1:
            raise ValueError("exponent vector must be nonempty")
        for v in self.e:
            if v == 0:
                raise ValueError("exponent components must be nonzero")
            if abs(v) >= MAX_MODULUS:
                raise ValueError(f"exponent {v} out of supported range")

    def __len__(self) -> int:
        return len(self.e)


@dataclass(frozen=True)
class PrimeContext:
    """A prime p with its smallest primitive root and full index table.

    index[x] = k with g^k = x mod p for x in [1, p-1]; index[0] = -1
    (sentinel) so that character tables can map residue 0 branchlessly.
    Immutable after construction and safe to share across workers.
    """

    p: int
    g: int
    index: np.ndarray

    def ind(self, x: int) -> int:
        return int(self.index[x % self.p])


def build_context(p: int) -> PrimeContext:
    """Build the PrimeContext for an odd prime 3 <= p < 2^31."""
    if p >= MAX_MODULUS:
        raise TooLargeError(f"modulus {p} >= 2^31")
    if p < 3 or not is_prime(p):
        raise NotPrimeError(f"{p} is not an odd prime >= 3")
    g = primitive_root(p)
    index = np.full(p, -1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        index[x] = k
        x = x * g % p
    return PrimeContext(p=p, g=g, index=index)


def monomial_eval(ctx: PrimeContext, x: Sequence[int], e: ExponentVector) -> int:
    """x_1^{e_1} ... x_n^{e_n} mod p, every coordinate nonzero mod p."""
    if len(x) != len(e):
        raise ValueError("coordinate/exponent dimension mismatch")
    p = ctx.p
    acc = 1
    for xj, ej in zip(x, e.e):
        if xj % p == 0:
            raise ZeroCoordinateError(f"coordinate {xj} is 0 mod {p}")
        acc = acc * pow_mod(xj, ej, p) % p
    return acc
