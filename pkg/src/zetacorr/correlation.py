"""Logarithmically averaged correlation of f(n) against its summatory past.

The central quantity is the partial sum

    s_plain(N) = sum_{n <= N} f(n) * F(n-1) / n

for the pairs (mu, Mertens) and (lambda, summatory Liouville), together with
the delta-weighted variant sum f(n) F(n-1) / n^(1+delta) and the normalized
value s_plain(N) / ln N.  Sums are accumulated with compensated arithmetic:
segment chunks are reduced exactly (math.fsum) and chunk totals merge through
a Neumaier accumulator in ascending order, so results are bitwise
reproducible for a fixed (stride, segment_capacity) schedule regardless of
thread count, and a run resumed from a checkpoint matches an uninterrupted
run bitwise.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .zeta import zeta as _zeta
from .sieve import (
    DEFAULT_SEGMENT_CAPACITY,
    ArithmeticFunctionKind,
    sieve_segment,
)


class CorrKindPair(enum.Enum):
    MOBIUS_MERTENS = "mobius-mertens"
    LIOUVILLE_SUMMATORY = "liouville-summatory"

    @property
    def kind(self) -> ArithmeticFunctionKind:
        if self is CorrKindPair.MOBIUS_MERTENS:
            return ArithmeticFunctionKind.MOBIUS
        return ArithmeticFunctionKind.LIOUVILLE


class CompensatedSum:
    """Neumaier-compensated float accumulator."""

    __slots__ = ("total", "comp")

    def __init__(self, total: float = 0.0, comp: float = 0.0):
        self.total = total
        self.comp = comp

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp

    @property
    def state(self) -> tuple[float, float]:
        return (self.total, self.comp)


def _weighted_term(f_n: int, f_prev_sum: int, n: int, delta: float) -> float:
    # n^(1+delta) via exp((1+delta) ln n); delta == 0 reuses the plain term
    # bitwise so the two accumulators stay identical
    if delta == 0.0:
        return f_n * f_prev_sum / n
    return f_n * f_prev_sum / math.exp((1.0 + delta) * math.log(n))


@dataclass
class CorrAccumulator:
    """Scalar step-by-step accumulator; n advances by exactly 1 per step."""

    pair: CorrKindPair
    delta: float = 0.0
    n: int = 1
    plain: CompensatedSum = field(default_factory=CompensatedSum)
    weighted: CompensatedSum = field(default_factory=CompensatedSum)

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")

    def accumulate(self, f_n: int, f_prev_sum: int) -> "CorrAccumulator":
        """Fold in the term for n = self.n + 1, where f_prev_sum = F(n-1)."""
        n = self.n + 1
        self.plain.add(f_n * f_prev_sum / n)
        self.weighted.add(_weighted_term(f_n, f_prev_sum, n, self.delta))
        self.n = n
        return self

    @property
    def s_plain(self) -> float:
        return self.plain.value

    @property
    def s_weighted(self) -> float:
        return self.weighted.value


def normalized(acc) -> float:
    """s_plain / ln n; needs n >= 2 for the log to be positive."""
    if acc.n <= 1:
        raise ValueError(f"normalized value undefined at n = {acc.n}")
    return acc.s_plain / math.log(acc.n)


@dataclass(frozen=True)
class CorrCheckpoint:
    """Engine state at a checkpoint; enough to resume bitwise."""

    pair: CorrKindPair
    delta: float
    n: int
    summatory: int
    plain_state: tuple[float, float]
    weighted_state: tuple[float, float]

    @property
    def s_plain(self) -> float:
        return self.plain_state[0] + self.plain_state[1]

    @property
    def s_weighted(self) -> float:
        return self.weighted_state[0] + self.weighted_state[1]

    @property
    def normalized(self) -> float:
        return normalized(self)


def _stride_chunks(lo: int, hi: int, stride: int) -> Iterator[tuple[int, int]]:
    # split [lo, hi] at every multiple of stride (chunk ends on the multiple)
    a = lo
    while a <= hi:
        b = min(((a + stride - 1) // stride) * stride, hi)
        yield a, b
        a = b + 1


def _capacity_segments(start, n_max, capacity) -> Iterator[tuple[int, int]]:
    # absolute grid [1, c], [c+1, 2c], ... so any resume point reproduces it
    lo = start
    while lo <= n_max:
        hi = min(((lo - 1) // capacity + 1) * capacity, n_max)
        yield lo, hi
        lo = hi + 1


def _prefetched(executor, fn, jobs, window):
    jobs = iter(jobs)
    pending = []
    for job in jobs:
        pending.append(executor.submit(fn, job))
        if len(pending) > window:
            yield pending.pop(0).result()
    for fut in pending:
        yield fut.result()


def correlation_checkpoints(
    pair: CorrKindPair,
    n_max: int,
    stride: int,
    delta: float = 0.0,
    threads: int = 1,
    segment_capacity: int = DEFAULT_SEGMENT_CAPACITY,
    resume: CorrCheckpoint | None = None,
) -> Iterator[CorrCheckpoint]:
    """Yield checkpoints at every stride multiple and at n_max.

    The summation schedule is fixed by (stride, segment_capacity) alone:
    chunk boundaries fall on every multiple of either, chunks are reduced
    with math.fsum, and chunk totals merge in ascending order.  `threads`
    only parallelizes sieving, so any thread count is bitwise identical.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    kind = pair.kind
    if resume is not None:
        if resume.pair is not pair or resume.delta != delta:
            raise ValueError("resume state does not match this run")
        if resume.n % stride != 0:
            raise ValueError("resume point must sit on a stride checkpoint")
        start = resume.n + 1
        summatory = resume.summatory
        plain = CompensatedSum(*resume.plain_state)
        weighted = CompensatedSum(*resume.weighted_state)
    else:
        start = 1
        summatory = 0
        plain = CompensatedSum()
        weighted = CompensatedSum()

    def sieve_job(bounds):
        lo, hi = bounds
        return sieve_segment(lo, hi, kind, segment_capacity)

    segments = _capacity_segments(start, n_max, segment_capacity)
    executor = None
    try:
        if threads > 1:
            executor = ThreadPoolExecutor(max_workers=threads)
            seg_iter = _prefetched(executor, sieve_job, segments, threads)
        else:
            seg_iter = map(sieve_job, segments)
        for seg in seg_iter:
            lo, hi = seg.lo, seg.hi
            cum = np.cumsum(seg.values, dtype=np.int64)
            f = seg.values.astype(np.float64)
            f_prev = np.empty(len(f))
            f_prev[0] = summatory
            np.add(summatory, cum[:-1], out=f_prev[1:], casting="unsafe")
            ns = np.arange(lo, hi + 1, dtype=np.float64)
            terms = f * f_prev / ns
            if delta != 0.0:
                wterms = f * f_prev * np.exp(-(1.0 + delta) * np.log(ns))
            for a, b in _stride_chunks(lo, hi, stride):
                chunk_sum = math.fsum(terms[a - lo : b - lo + 1])
                plain.add(chunk_sum)
                if delta != 0.0:
                    weighted.add(math.fsum(wterms[a - lo : b - lo + 1]))
                else:
                    weighted.add(chunk_sum)
                if b % stride == 0 or b == n_max:
                    yield CorrCheckpoint(
                        pair=pair,
                        delta=delta,
                        n=b,
                        summatory=summatory + int(cum[b - lo]),
                        plain_state=plain.state,
                        weighted_state=weighted.state,
                    )
            summatory += int(cum[-1])
    finally:
        if executor is not None:
            executor.shutdown(wait=False, cancel_futures=True)


@dataclass(frozen=True)
class WeightedSumParams:
    """Parameters of the delta-weighted normalized sum.

    Either give n_max and delta directly, or derive them from a height T
    and exponent c via from_height: n_max = floor(T^(1-c)), delta = 1/n_max.
    """

    n_max: int
    delta: float
    c: float | None = None
    t_height: float | None = None

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.c is not None and not 0.0 < self.c < 1.0:
            raise ValueError("c must lie in (0, 1)")

    @classmethod
    def from_height(cls, c: float, t_height: float,
                    delta: float | None = None) -> "WeightedSumParams":
        if not 0.0 < c < 1.0:
            raise ValueError("c must lie in (0, 1)")
        if not t_height > 1.0:
            raise ValueError("t_height must exceed 1")
        n_max = int(t_height ** (1.0 - c))
        if delta is None:
            delta = 1.0 / n_max
        elif delta > 1.0:
            # the height-derived regime keeps delta on the 1/n_max scale
            raise ValueError("delta must be <= 1 when derived from (c, T)")
        return cls(n_max=n_max, delta=delta, c=c, t_height=t_height)


def weighted_theorem_sum(
    pair: CorrKindPair,
    params: WeightedSumParams,
    zeta_one_plus_delta: float | None = None,
) -> float:
    """(1/zeta(1+delta)) * sum_{n <= n_max} f(n) F(n-1) / n^(1+delta).

    The zeta(1+delta) factor may be supplied; when omitted it is evaluated
    here.
    """
    last = None
    for last in correlation_checkpoints(
        pair, params.n_max, stride=params.n_max, delta=params.delta
    ):
        pass
    assert last is not None
    if zeta_one_plus_delta is None:
        z = _zeta(1.0 + params.delta)
        zeta_one_plus_delta = float(z.real if isinstance(z, complex) else z)
    return last.s_weighted / zeta_one_plus_delta


def shifted_autocorr(
    kind: ArithmeticFunctionKind,
    k: int,
    n_max: int,
    segment_capacity: int = DEFAULT_SEGMENT_CAPACITY,
) -> float:
    """sum_{n = k+1}^{n_max} f(n) f(n-k) / n for a fixed shift k >= 1.

    Summing this over k = 1 .. N-1 recovers s_plain(N) exactly, since
    F(n-1) = sum_{k < n} f(n-k).
    """
    if k < 1:
        raise ValueError("shift k must be >= 1")
    if n_max <= k:
        return 0.0
    total = CompensatedSum()
    for lo, hi in _capacity_segments(k + 1, n_max, segment_capacity):
        seg = sieve_segment(lo, hi, kind, segment_capacity)
        lag = sieve_segment(lo - k, hi - k, kind, segment_capacity)
        ns = np.arange(lo, hi + 1, dtype=np.float64)
        terms = seg.values.astype(np.float64) * lag.values.astype(np.float64) / ns
        total.add(math.fsum(terms))
    return total.value
