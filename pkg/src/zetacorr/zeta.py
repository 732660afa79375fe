"""Riemann zeta on Re(s) > -1 by Euler-Maclaurin, with a certified error bound.

The evaluator computes

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{k=1}^{K} B_{2k}/(2k)! * (s)_{2k-1} * N^(-s-2k+1) + R_K

where (s)_j is the rising factorial and the remainder satisfies the
standard bound |R_K| <= |B_{2K+2}/(2K+2)!| * |(s)_{2K+1}| * N^(-sigma-2K-1)
* |s+2K+1| / (sigma+2K+1).  The number of correction terms actually used is
the K <= budget that minimizes this bound, so enlarging either the direct
sum or the Bernoulli budget never worsens the certificate.

Also provides the alternating correction series over the trivial zeros
(`k_series`) and the reference constants used by the correlation reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi

# |Im s| above this would need a prohibitively long direct sum; refuse
MAX_HEIGHT = 5_000_000.0

_BERNOULLI_MAX_INDEX = 62  # exact B_2 .. B_60 for terms, B_62 for the last bound


class AccuracyError(ArithmeticError):
    """The certified Euler-Maclaurin remainder exceeds the requested target."""


def _bernoulli_even() -> np.ndarray:
    # exact rationals via the defining recurrence, cached as floats;
    # index j holds B_{2j+2}
    m_max = _BERNOULLI_MAX_INDEX
    b = [Fraction(1)]
    for m in range(1, m_max + 1):
        acc = Fraction(0)
        comb = 1
        for j in range(m):
            acc += comb * b[j]
            comb = comb * (m + 1 - j) // (j + 1)
        b.append(-acc / (m + 1))
    return np.array([float(b[2 * j + 2]) for j in range(m_max // 2)])


_B_EVEN = _bernoulli_even()


def bernoulli_even(k: int) -> float:
    """B_{2k} as a float, 1 <= k <= 30."""
    return float(_B_EVEN[k - 1])


@dataclass(frozen=True)
class EulerMaclaurinParams:
    """Evaluation knobs.  None means auto-sized from |Im s|.

    n_terms: direct-sum cutoff N; auto is max(20, ceil(1.3*|Im s|/(2*pi))).
    k_bernoulli: budget of correction terms, 1..30; auto uses the full table.
    target_abs_err: certified accuracy demanded of the result.
    """

    n_terms: int | None = None
    k_bernoulli: int | None = 12
    target_abs_err: float = 1e-9

    def __post_init__(self):
        if self.n_terms is not None and self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if self.k_bernoulli is not None and not 1 <= self.k_bernoulli <= 30:
            raise ValueError("k_bernoulli must be in [1, 30]")
        if not self.target_abs_err > 0:
            raise ValueError("target_abs_err must be positive")


AUTO_PARAMS = EulerMaclaurinParams(n_terms=None, k_bernoulli=None)


def auto_n_terms(im_s: float) -> int:
    return max(20, math.ceil(1.3 * abs(im_s) / TWO_PI))


def _em_batch(s: np.ndarray, n_terms: int, k_budget: int):
    """Euler-Maclaurin for a vector of s sharing one direct-sum cutoff.

    Returns (values, certified remainder bounds).  Correction terms are
    accumulated for every k up to k_budget and the best certificate wins.
    """
    sigma = s.real
    big_n = float(n_terms)
    n = np.arange(1, n_terms, dtype=np.float64)
    direct = np.exp(-np.multiply.outer(s, np.log(n))).sum(axis=-1)

    n_pow = np.exp(-s * math.log(big_n))  # N^-s
    tail = n_pow * (big_n / (s - 1.0) + 0.5)

    # walk k = 1..budget keeping the partial sum attached to the best bound
    poch = s.copy()  # (s)_{2k-1}, starts at k=1
    n_fac = n_pow / big_n  # N^(-s-2k+1), starts at k=1
    corr = np.zeros_like(s)
    best_val = direct + tail
    # k=0 certificate: the first omitted term is the k=1 correction
    best_bound = (
        abs(_B_EVEN[0]) / math.factorial(2)
        * np.abs(poch) * np.abs(n_fac) * np.abs(s + 1.0) / (sigma + 1.0)
    )
    for k in range(1, k_budget + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            term = (_B_EVEN[k - 1] / math.factorial(2 * k)) * poch * n_fac
            poch_next = poch * (s + (2 * k - 1)) * (s + 2 * k)
        if not np.all(np.isfinite(term)) or not np.all(np.isfinite(poch_next)):
            break  # rising factorial overflowed; earlier certificate stands
        corr = corr + term
        n_fac_next = n_fac / (big_n * big_n)
        bound = (
            abs(_B_EVEN[k]) / math.factorial(2 * k + 2)
            * np.abs(poch_next) * np.abs(n_fac_next)
            * np.abs(s + (2 * k + 1)) / (sigma + 2 * k + 1)
        )
        improved = bound < best_bound
        best_val = np.where(improved, direct + tail + corr, best_val)
        best_bound = np.minimum(bound, best_bound)
        poch, n_fac = poch_next, n_fac_next
    return best_val, best_bound


def remainder_bound(s: complex, n_terms: int, k_terms: int) -> float:
    """Certified remainder after k_terms corrections with cutoff n_terms.

    Evaluated in log space so it degrades to 0/inf instead of overflowing.
    """
    sigma = s.real
    log_poch = 0.0
    for j in range(2 * k_terms + 1):
        log_poch += math.log(abs(s + j))
    log_bound = (
        math.log(abs(_B_EVEN[k_terms])) - math.lgamma(2 * k_terms + 3)
        + log_poch - (sigma + 2 * k_terms + 1) * math.log(n_terms)
        + math.log(abs(s + 2 * k_terms + 1)) - math.log(sigma + 2 * k_terms + 1)
    )
    try:
        return math.exp(log_bound)
    except OverflowError:
        return math.inf


def _best_bound(s: complex, n_terms: int, k_budget: int) -> float:
    return min(remainder_bound(s, n_terms, k) for k in range(k_budget + 1))


# direct sums are capped here; a single doubling already crushes the bound
_MAX_N_TERMS = 1 << 24


def _auto_cutoff(s_worst: complex, k_budget: int, target: float) -> int:
    """Auto-sized direct-sum cutoff, doubled until the certificate fits."""
    n_terms = auto_n_terms(s_worst.imag)
    while _best_bound(s_worst, n_terms, k_budget) > target:
        n_terms *= 2
        if n_terms > _MAX_N_TERMS:
            raise AccuracyError(
                f"no admissible cutoff reaches target {target:.3e} at s={s_worst}"
            )
    return n_terms


def certified_bound(s: complex, params: EulerMaclaurinParams = AUTO_PARAMS) -> float:
    """The remainder certificate zeta() would attach to this evaluation."""
    s = complex(s)
    _check_domain(s)
    k_budget = params.k_bernoulli or len(_B_EVEN) - 1
    if params.n_terms is None:
        n_terms = _auto_cutoff(s, k_budget, params.target_abs_err)
    else:
        n_terms = params.n_terms
    return _best_bound(s, n_terms, k_budget)


def _check_domain(s: complex):
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    if s.real <= -1.0:
        raise ValueError(f"Re(s) must exceed -1, got {s.real}")
    if abs(s.imag) > MAX_HEIGHT:
        raise ValueError(
            f"|Im s| = {abs(s.imag):g} exceeds the supported height {MAX_HEIGHT:g}"
        )
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise ValueError("s must be finite")


def zeta(s: complex, params: EulerMaclaurinParams = AUTO_PARAMS) -> complex:
    """zeta(s) for Re(s) > -1, s != 1, certified to params.target_abs_err.

    The certificate bounds the series truncation; floating-point rounding
    adds on the order of 1e-13 times the direct sum's magnitude, which is
    negligible everywhere except vanishing Re(s) at extreme heights.
    """
    s = complex(s)
    _check_domain(s)
    k_budget = params.k_bernoulli or len(_B_EVEN) - 1
    if params.n_terms is None:
        n_terms = _auto_cutoff(s, k_budget, params.target_abs_err)
    else:
        n_terms = params.n_terms
    vals, bounds = _em_batch(np.array([s]), n_terms, k_budget)
    if bounds[0] > params.target_abs_err:
        raise AccuracyError(
            f"certified remainder {bounds[0]:.3e} exceeds target "
            f"{params.target_abs_err:.3e} at s={s}; raise n_terms/k_bernoulli"
        )
    value = complex(vals[0])
    return value.real if s.imag == 0 else value  # type: ignore[return-value]


def zeta_line_batch(
    gammas: np.ndarray,
    target_abs_err: float = 1e-7,
    block_elems: int = 6_000_000,
) -> np.ndarray:
    """zeta(1 + 2i*gamma) for an ascending array of ordinates.

    Consecutive ordinates share one direct-sum cutoff per block so the inner
    power sum vectorizes over (block x N); blocks are sized to cap memory.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    if len(gammas) == 0:
        return np.empty(0, dtype=np.complex128)
    if np.max(np.abs(gammas)) * 2 > MAX_HEIGHT:
        raise ValueError("ordinate exceeds the supported height")
    out = np.empty(len(gammas), dtype=np.complex128)
    k_budget = len(_B_EVEN) - 1
    pos = 0
    while pos < len(gammas):
        n_terms = auto_n_terms(2.0 * gammas[pos])
        width = max(1, min(block_elems // max(n_terms, 1), 4096))
        hi = min(pos + width, len(gammas))
        # size the cutoff for the largest ordinate in the block
        n_terms = _auto_cutoff(
            complex(1.0, 2.0 * float(gammas[hi - 1])), k_budget, target_abs_err
        )
        s = 1.0 + 2.0j * gammas[pos:hi]
        vals, bounds = _em_batch(s, n_terms, k_budget)
        worst = float(np.max(bounds))
        if worst > target_abs_err:
            raise AccuracyError(
                f"certified remainder {worst:.3e} exceeds target "
                f"{target_abs_err:.3e} in batch block"
            )
        out[pos:hi] = vals
        pos = hi
    return out


_odd_zeta_cache: dict[int, float] = {}


def _zeta_odd(m: int) -> float:
    # zeta at odd integers 3, 5, 7, ... (real)
    v = _odd_zeta_cache.get(m)
    if v is None:
        v = float(zeta(float(m)).real)
        _odd_zeta_cache[m] = v
    return v


def k_series(n: float) -> float:
    """sum_{k>=1} (-1)^k (2pi/n)^{2k} / ((2k)! k zeta(2k+1)), n >= 1.

    The alternating series over the trivial zeros appearing in the truncated
    reconstruction of the Mertens function.  Terms are added until they fall
    below 1e-15 in magnitude; the result is exactly real by construction.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x2 = (TWO_PI / n) ** 2
    total = 0.0
    power_over_fact = 1.0  # (2pi/n)^{2k} / (2k)!
    for k in range(1, 400):
        power_over_fact *= x2 / ((2 * k - 1) * (2 * k))
        term = power_over_fact / (k * _zeta_odd(2 * k + 1))
        if k % 2 == 1:
            term = -term
        total += term
        if abs(term) < 1e-15:
            return total
    raise AccuracyError("k_series did not converge")  # pragma: no cover


@dataclass(frozen=True)
class ReferenceConstants:
    """Constants the correlation reports are judged against.

    minus_three_over_pi_sq: the Mertens-side mean value -3/pi^2.
    zeta_half: zeta(1/2).
    liouville_bias: (1/zeta(1/2)^2 - 1)/2, the Liouville-side mean value.
    k_series_1: k_series(1), fixing the conditional-convergence limit
        5/2 + k_series_1 of the signed zero sum.
    """

    minus_three_over_pi_sq: float
    zeta_half: float
    liouville_bias: float
    k_series_1: float

    def __post_init__(self):
        assert self.zeta_half < 0
        assert -0.27 < self.liouville_bias < -0.26


_HIGH_ACCURACY = EulerMaclaurinParams(n_terms=40, k_bernoulli=None,
                                      target_abs_err=1e-13)


def constants() -> ReferenceConstants:
    zeta_half = float(zeta(0.5, _HIGH_ACCURACY).real)
    return ReferenceConstants(
        minus_three_over_pi_sq=-3.0 / math.pi**2,
        zeta_half=zeta_half,
        liouville_bias=0.5 * (1.0 / zeta_half**2 - 1.0),
        k_series_1=k_series(1.0),
    )
