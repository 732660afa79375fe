"""Zero tables: ingestion, sums over zeros, and explicit-formula partial sums.

A zero table lists the first N nontrivial zeros rho = 1/2 + i*gamma of the
zeta function on the critical line together with zeta'(rho), as CSV with
header ``index,gamma,zeta_prime_re,zeta_prime_im``.  Gzip-compressed tables
are detected by magic bytes and the integrity digest is always taken over
the decompressed bytes, so a table and its gzipped form share one digest.

Every sum here cuts off strictly below a height t (gamma < t).  For a fixed
table and cutoff the reductions run over a fixed prefix in index order, so
repeated evaluations agree bitwise.
"""

from __future__ import annotations

import gzip
import io
import math
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .sieve import ArithmeticFunctionKind, naive_value
from .zeta import constants, k_series, zeta_line_batch

EXPECTED_HEADER = "index,gamma,zeta_prime_re,zeta_prime_im"
FIRST_ORDINATE_WINDOW = (14.0, 14.2)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF

# zeta(1 + 2i*gamma) values extend in fixed-size blocks so the cached prefix
# is independent of the call sequence that grew it
_ZLINE_BLOCK = 4096
_ZLINE_TARGET = 1e-7


class ZeroTableError(ValueError):
    """A zero table failed structural or numeric validation."""


def fnv1a64(data: bytes) -> str:
    """FNV-1a 64-bit digest as 16 lowercase hex digits."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return f"{h:016x}"


@dataclass(frozen=True)
class ZeroRecord:
    index: int
    gamma: float
    zeta_prime: complex


class ZeroTable:
    """Columnar store of zeros: ordinates gamma and derivatives zeta'(rho)."""

    def __init__(
        self,
        gamma,
        zeta_prime,
        source_digest: str | None = None,
        first_ordinate_check: bool = True,
    ):
        gamma = np.ascontiguousarray(gamma, dtype=np.float64)
        zeta_prime = np.ascontiguousarray(zeta_prime, dtype=np.complex128)
        if gamma.ndim != 1 or zeta_prime.shape != gamma.shape:
            raise ZeroTableError("gamma and zeta_prime must be equal-length 1-d arrays")
        if len(gamma) == 0:
            raise ZeroTableError("table has no rows")
        if not np.all(np.isfinite(gamma)):
            i = int(np.flatnonzero(~np.isfinite(gamma))[0])
            raise ZeroTableError(f"non-finite ordinate at index {i + 1}")
        zp_finite = np.isfinite(zeta_prime.real) & np.isfinite(zeta_prime.imag)
        if not np.all(zp_finite):
            i = int(np.flatnonzero(~zp_finite)[0])
            raise ZeroTableError(f"non-finite derivative at index {i + 1}")
        if gamma[0] <= 0.0 or np.any(np.diff(gamma) <= 0.0):
            raise ZeroTableError("ordinates must be positive and strictly increasing")
        zero_zp = (zeta_prime.real == 0.0) & (zeta_prime.imag == 0.0)
        if np.any(zero_zp):
            i = int(np.flatnonzero(zero_zp)[0])
            raise ZeroTableError(
                f"zero derivative at index {i + 1}; every listed zero must be simple"
            )
        if first_ordinate_check:
            lo, hi = FIRST_ORDINATE_WINDOW
            if not lo <= gamma[0] <= hi:
                raise ZeroTableError(
                    f"first ordinate {float(gamma[0]):g} outside [{lo}, {hi}]; "
                    "the table must start at the first zero"
                )
        gamma.setflags(write=False)
        zeta_prime.setflags(write=False)
        self.gamma = gamma
        self.zeta_prime = zeta_prime
        self.source_digest = source_digest
        self._weights_cache: np.ndarray | None = None
        self._a_terms_cache: np.ndarray | None = None
        self._moment_terms_cache: dict[float, np.ndarray] = {}
        self._zline = np.empty(0, dtype=np.complex128)

    @classmethod
    def from_arrays(cls, gamma, zeta_prime) -> "ZeroTable":
        """Build a table from arrays, e.g. synthetic fixtures; no digest and
        no requirement that it start at the first zero."""
        return cls(gamma, zeta_prime, source_digest=None, first_ordinate_check=False)

    def __len__(self) -> int:
        return len(self.gamma)

    def __getitem__(self, i: int) -> ZeroRecord:
        if not isinstance(i, (int, np.integer)):
            raise TypeError("indices must be integers")
        n = len(self.gamma)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError("zero index out of range")
        return ZeroRecord(i + 1, float(self.gamma[i]), complex(self.zeta_prime[i]))

    def __iter__(self) -> Iterator[ZeroRecord]:
        for i in range(len(self.gamma)):
            yield self[i]

    def count_below(self, t: float) -> int:
        """Number of zeros with gamma < t (strict)."""
        t = float(t)
        if not math.isfinite(t):
            raise ValueError("cutoff height must be finite")
        return int(np.searchsorted(self.gamma, t, side="left"))

    def _weights(self) -> np.ndarray:
        # 1 / (rho * zeta'(rho))
        if self._weights_cache is None:
            rho = 0.5 + 1j * self.gamma
            self._weights_cache = 1.0 / (rho * self.zeta_prime)
        return self._weights_cache

    def _a_terms(self) -> np.ndarray:
        # 1 / (|rho|^2 |zeta'(rho)|^2)
        if self._a_terms_cache is None:
            zp_sq = self.zeta_prime.real**2 + self.zeta_prime.imag**2
            self._a_terms_cache = 1.0 / ((0.25 + self.gamma**2) * zp_sq)
        return self._a_terms_cache

    def _moment_terms(self, k: float) -> np.ndarray:
        # |zeta'(rho)|^(-2k); fractional k allowed
        cached = self._moment_terms_cache.get(k)
        if cached is None:
            zp_sq = self.zeta_prime.real**2 + self.zeta_prime.imag**2
            cached = zp_sq ** (-k)
            self._moment_terms_cache[k] = cached
        return cached

    def zeta_line_prefix(self, k: int) -> np.ndarray:
        """zeta(1 + 2i*gamma_j) for the first k zeros, cached."""
        k = min(k, len(self.gamma))
        if len(self._zline) < k:
            upto = min(
                len(self.gamma),
                ((k + _ZLINE_BLOCK - 1) // _ZLINE_BLOCK) * _ZLINE_BLOCK,
            )
            fresh = zeta_line_batch(
                self.gamma[len(self._zline) : upto], target_abs_err=_ZLINE_TARGET
            )
            self._zline = np.concatenate([self._zline, fresh])
        return self._zline[:k]


def _parse_error_rescan(lines: list[str]) -> None:
    # pinpoint the first offending row after the numpy fast path rejects it
    for i, line in enumerate(lines, start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise ZeroTableError(
                f"line {i}: expected 4 comma-separated fields, found {len(parts)}"
            )
        for j, part in enumerate(parts):
            try:
                float(part)
            except ValueError:
                raise ZeroTableError(
                    f"line {i}, column {j + 1}: not a number: {part.strip()!r}"
                ) from None


def load_zeros(path) -> ZeroTable:
    """Read and validate a zero table from a CSV or gzipped CSV file."""
    path = os.fspath(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:2] == b"\x1f\x8b":
        try:
            raw = gzip.decompress(raw)
        except (OSError, EOFError) as exc:
            raise ZeroTableError(f"bad gzip stream in {path}: {exc}") from exc
    digest = fnv1a64(raw)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ZeroTableError(f"{path} is not UTF-8 text: {exc}") from exc

    newline = text.find("\n")
    header = (text if newline < 0 else text[:newline]).rstrip("\r")
    if header != EXPECTED_HEADER:
        raise ZeroTableError(
            f"unexpected header {header!r}; expected {EXPECTED_HEADER!r}"
        )
    body = text[newline + 1 :] if newline >= 0 else ""
    lines = body.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for i, line in enumerate(lines, start=2):
        if line.strip() == "":
            raise ZeroTableError(f"line {i}: blank line inside the table")
    if not lines:
        raise ZeroTableError("table has a header but no rows")

    try:
        data = np.loadtxt(
            io.StringIO(body), delimiter=",", comments=None, ndmin=2, dtype=np.float64
        )
    except ValueError:
        _parse_error_rescan(lines)
        raise ZeroTableError("malformed table") from None
    if data.shape[1] != 4:
        _parse_error_rescan(lines)
        raise ZeroTableError("malformed table")

    idx = data[:, 0]
    expected = np.arange(1.0, len(idx) + 1.0)
    if not np.array_equal(idx, expected):
        i = int(np.flatnonzero(idx != expected)[0])
        raise ZeroTableError(
            f"line {i + 2}: index {idx[i]:g} breaks the run 1..N at position {i + 1}"
        )
    return ZeroTable(
        data[:, 1],
        data[:, 2] + 1j * data[:, 3],
        source_digest=digest,
        first_ordinate_check=True,
    )


def sum_a(table: ZeroTable, t: float) -> float:
    """sum over gamma < t of 1 / (|rho|^2 |zeta'(rho)|^2)."""
    k = table.count_below(t)
    return float(np.sum(table._a_terms()[:k])) if k else 0.0


def sum_b(table: ZeroTable, t: float) -> float:
    """sum over gamma < t of |zeta(1+2i*gamma)|^2 / (|rho|^2 |zeta'(rho)|^2)."""
    k = table.count_below(t)
    if k == 0:
        return 0.0
    zl = table.zeta_line_prefix(k)
    line_sq = zl.real**2 + zl.imag**2
    return float(np.sum(line_sq * table._a_terms()[:k]))


def sum_c(table: ZeroTable, t: float) -> float:
    """2 * sum over gamma < t of Re(1 / (rho * zeta'(rho)))."""
    k = table.count_below(t)
    if k == 0:
        return 0.0
    return 2.0 * float(np.sum(table._weights()[:k].real))


def moment_j(table: ZeroTable, k: float, t: float) -> float:
    """J_{-k}(t) = 2 * sum over gamma < t of |zeta'(rho)|^(-2k), k > 0 real."""
    k = float(k)
    if not k > 0:
        raise ValueError("moment order k must be positive")
    m = table.count_below(t)
    if m == 0:
        return 0.0
    return 2.0 * float(np.sum(table._moment_terms(k)[:m]))


@dataclass(frozen=True)
class ZeroSumReport:
    t: float
    count: int
    sum_a: float
    sum_b: float
    sum_c: float
    j_minus_1: float


def zero_sum_report(table: ZeroTable, t: float) -> ZeroSumReport:
    return ZeroSumReport(
        t=float(t),
        count=table.count_below(t),
        sum_a=sum_a(table, t),
        sum_b=sum_b(table, t),
        sum_c=sum_c(table, t),
        j_minus_1=moment_j(table, 1, t),
    )


def zero_sum_checkpoints(
    table: ZeroTable, every: int = 1000
) -> Iterator[ZeroSumReport]:
    """Reports at heights covering the first m zeros for m = every, 2*every, ...

    Interior cutoffs sit halfway between consecutive ordinates so each report
    covers exactly m zeros; the final cutoff is just above the last ordinate.
    """
    if every < 1:
        raise ValueError("checkpoint spacing must be >= 1")
    n = len(table)
    for m in range(every, n, every):
        t = (table.gamma[m - 1] + table.gamma[m]) / 2.0
        yield zero_sum_report(table, t)
    yield zero_sum_report(table, float(table.gamma[-1]) + 1.0)


_ZETA_HALF: float | None = None


def _zeta_half() -> float:
    global _ZETA_HALF
    if _ZETA_HALF is None:
        _ZETA_HALF = constants().zeta_half
    return _ZETA_HALF


def reconstruct_mertens(n: int, table: ZeroTable, t: float) -> float:
    """Partial-sum approximation to the Mertens function at n - 1.

    2 * sum over gamma < t of Re(n^rho / (rho zeta'(rho))), minus the
    non-oscillating parts: 2, the even-trivial-zero tail at n, and half the
    value at the endpoint n itself.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = table.count_below(t)
    ln_n = math.log(n)
    osc = np.exp(1j * (table.gamma[:k] * ln_n)) * table._weights()[:k]
    zero_part = 2.0 * math.sqrt(n) * float(np.sum(osc.real))
    mu_n = naive_value(n, ArithmeticFunctionKind.MOBIUS)
    return zero_part - 2.0 - k_series(n) - mu_n / 2.0


def reconstruct_liouville(n: int, table: ZeroTable, t: float) -> float:
    """Partial-sum approximation to the summatory Liouville function at n - 1.

    sqrt(n)/zeta(1/2) from the pole of zeta(2s)/zeta(s) at s = 1/2, plus
    2 * sum over gamma < t of Re(zeta(1+2i*gamma) n^rho / (rho zeta'(rho))),
    plus 1 from s = 0, minus half the endpoint value.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = table.count_below(t)
    ln_n = math.log(n)
    zl = table.zeta_line_prefix(k)
    osc = zl * np.exp(1j * (table.gamma[:k] * ln_n)) * table._weights()[:k]
    zero_part = 2.0 * math.sqrt(n) * float(np.sum(osc.real))
    lam_n = naive_value(n, ArithmeticFunctionKind.LIOUVILLE)
    return math.sqrt(n) / _zeta_half() + zero_part - lam_n / 2.0 + 1.0
