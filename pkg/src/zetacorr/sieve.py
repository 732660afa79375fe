"""Segmented sieves for signed multiplicative indicators and their summatory functions.

Supported pointwise functions: the Mobius function mu(n), the Liouville
function lambda(n) = (-1)^Omega(n), the squarefree indicator mu(n)^2, and
the constant 1.  Values are produced segment-at-a-time as int8 arrays so
that runs up to 1e9 never hold the full range in memory.  Summatory values
(Mertens-style partial sums) are carried as exact Python integers across
segment boundaries; the empty sum at n = 0 is 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_SEGMENT_CAPACITY = 1 << 22

# summatory totals are asserted to stay below this, far before int64 wraps
_WIDE_LIMIT = 1 << 62


class ArithmeticFunctionKind(enum.Enum):
    MOBIUS = "mobius"
    LIOUVILLE = "liouville"
    MOBIUS_SQUARED = "mobius-squared"
    ONE = "one"


@dataclass(frozen=True)
class ArithmeticSegment:
    """Pointwise values f(lo), f(lo+1), ..., f(hi) as an int8 array."""

    lo: int
    hi: int
    kind: ArithmeticFunctionKind
    values: np.ndarray

    def __post_init__(self):
        assert self.values.dtype == np.int8
        assert len(self.values) == self.hi - self.lo + 1


@dataclass(frozen=True)
class SummatoryState:
    """Exact partial sum F(n) = sum_{m <= n} f(m)."""

    n: int
    total: int
    kind: ArithmeticFunctionKind


_prime_cache = np.empty(0, dtype=np.int64)
_prime_cache_limit = 1


def primes_upto(limit: int) -> np.ndarray:
    """Primes <= limit, cached and grown geometrically across calls."""
    global _prime_cache, _prime_cache_limit
    if limit > _prime_cache_limit:
        new_limit = max(limit, 2 * _prime_cache_limit, 1 << 10)
        is_prime = np.ones(new_limit + 1, dtype=bool)
        is_prime[:2] = False
        for p in range(2, math.isqrt(new_limit) + 1):
            if is_prime[p]:
                is_prime[p * p :: p] = False
        _prime_cache = np.nonzero(is_prime)[0].astype(np.int64)
        _prime_cache_limit = new_limit
    return _prime_cache[: np.searchsorted(_prime_cache, limit, side="right")]


def _first_multiple(value: int, lo: int) -> int:
    # offset of the first multiple of `value` inside the segment, relative to lo
    return (-lo) % value


def sieve_segment(
    lo: int,
    hi: int,
    kind: ArithmeticFunctionKind,
    segment_capacity: int = DEFAULT_SEGMENT_CAPACITY,
) -> ArithmeticSegment:
    """Sieve f(n) for n in [lo, hi].

    Requires 1 <= lo <= hi and hi - lo + 1 <= segment_capacity.  Base primes
    up to sqrt(hi) are taken from a process-wide cache.
    """
    if lo < 1:
        raise ValueError(f"segment must start at 1 or above, got lo={lo}")
    if hi < lo:
        raise ValueError(f"empty segment [{lo}, {hi}]")
    length = hi - lo + 1
    if length > segment_capacity:
        raise ValueError(
            f"segment length {length} exceeds capacity {segment_capacity}"
        )

    if kind is ArithmeticFunctionKind.ONE:
        return ArithmeticSegment(lo, hi, kind, np.ones(length, dtype=np.int8))

    primes = primes_upto(math.isqrt(hi))

    if kind is ArithmeticFunctionKind.MOBIUS_SQUARED:
        vals = np.ones(length, dtype=np.int8)
        for p in primes:
            p2 = int(p) * int(p)
            if p2 > hi:
                break
            vals[_first_multiple(p2, lo) :: p2] = 0
        return ArithmeticSegment(lo, hi, kind, vals)

    vals = np.ones(length, dtype=np.int8)
    # leftover cofactor after dividing out every sieved prime (prime power
    # for Liouville); anything > 1 at the end is a single prime > sqrt(hi)
    rem = np.arange(lo, hi + 1, dtype=np.int64)

    if kind is ArithmeticFunctionKind.MOBIUS:
        for p in primes:
            p = int(p)
            sl = slice(_first_multiple(p, lo), None, p)
            vals[sl] *= -1
            rem[sl] //= p
            p2 = p * p
            if p2 <= hi:
                vals[_first_multiple(p2, lo) :: p2] = 0
        live = vals != 0
        vals[live & (rem > 1)] *= -1
    elif kind is ArithmeticFunctionKind.LIOUVILLE:
        # flip once per prime-power divisor: n gets v_p(n) flips from p
        for p in primes:
            p = int(p)
            pk = p
            while pk <= hi:
                sl = slice(_first_multiple(pk, lo), None, pk)
                vals[sl] *= -1
                rem[sl] //= p
                pk *= p
        vals[rem > 1] *= -1
    else:
        raise ValueError(f"unknown kind {kind!r}")

    if lo == 1:
        vals[0] = 1  # n = 1 has no prime factors
    return ArithmeticSegment(lo, hi, kind, vals)


def naive_value(n: int, kind: ArithmeticFunctionKind) -> int:
    """Evaluate f(n) by trial division.  Independent oracle for the sieve.

    Practical for n up to about 1e12.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if kind is ArithmeticFunctionKind.ONE:
        return 1
    m = n
    big_omega = 0
    squarefree = True
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            big_omega += e
            if e > 1:
                squarefree = False
        p += 1 if p == 2 else 2
    if m > 1:
        big_omega += 1
    if kind is ArithmeticFunctionKind.MOBIUS:
        return 0 if not squarefree else (1 if big_omega % 2 == 0 else -1)
    if kind is ArithmeticFunctionKind.LIOUVILLE:
        return 1 if big_omega % 2 == 0 else -1
    if kind is ArithmeticFunctionKind.MOBIUS_SQUARED:
        return 1 if squarefree else 0
    raise ValueError(f"unknown kind {kind!r}")


def summatory_stream(
    n_max: int,
    kind: ArithmeticFunctionKind,
    stride: int = 1,
    segment_capacity: int = DEFAULT_SEGMENT_CAPACITY,
) -> Iterator[SummatoryState]:
    """Yield F(n) at every n divisible by stride, and at n = n_max.

    F is exact (Python int); |F(n)| <= n is asserted at every emission.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    if stride < 1:
        raise ValueError(f"stride must be positive, got {stride}")
    if n_max >= _WIDE_LIMIT:
        raise ValueError(f"n_max {n_max} exceeds the supported range")
    total = 0
    for lo in range(1, n_max + 1, segment_capacity):
        hi = min(lo + segment_capacity - 1, n_max)
        seg = sieve_segment(lo, hi, kind, segment_capacity)
        cum = np.cumsum(seg.values, dtype=np.int64)
        first = lo + _first_multiple(stride, lo)
        for n in range(first, hi + 1, stride):
            value = total + int(cum[n - lo])
            assert abs(value) <= n, "summatory magnitude exceeded n"
            yield SummatoryState(n, value, kind)
        if hi == n_max and n_max % stride != 0:
            value = total + int(cum[-1])
            assert abs(value) <= n_max, "summatory magnitude exceeded n"
            yield SummatoryState(n_max, value, kind)
        total += int(cum[-1])
