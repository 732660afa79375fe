"""Sieve correctness: fixed-value examples, naive trial division, an
independent smallest-prime-factor oracle, and structural properties."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import spf_pointwise
from zetacorr.sieve import (
    DEFAULT_SEGMENT_CAPACITY,
    ArithmeticFunctionKind,
    primes_upto,
    naive_value,
    sieve_segment,
    summatory_stream,
)

MOBIUS = ArithmeticFunctionKind.MOBIUS
LIOUVILLE = ArithmeticFunctionKind.LIOUVILLE
MOBIUS_SQUARED = ArithmeticFunctionKind.MOBIUS_SQUARED
ONE = ArithmeticFunctionKind.ONE

ALL_KINDS = (MOBIUS, LIOUVILLE, MOBIUS_SQUARED, ONE)


# --- fixed small values -----------------------------------------------------

def test_mobius_first_ten():
    seg = sieve_segment(1, 10, MOBIUS)
    assert seg.values.tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_liouville_first_eight():
    seg = sieve_segment(1, 8, LIOUVILLE)
    assert seg.values.tolist() == [1, -1, -1, 1, -1, 1, -1, -1]


def test_mobius_squared_first_eight():
    seg = sieve_segment(1, 8, MOBIUS_SQUARED)
    assert seg.values.tolist() == [1, 1, 1, 0, 1, 1, 1, 0]


def test_one_kind_is_constant():
    seg = sieve_segment(5, 25, ONE)
    assert seg.values.tolist() == [1] * 21


def test_naive_spot_values():
    assert naive_value(12, MOBIUS) == 0
    assert naive_value(30, MOBIUS) == -1
    assert naive_value(12, LIOUVILLE) == -1
    assert naive_value(1, MOBIUS) == 1
    assert naive_value(1, LIOUVILLE) == 1
    assert naive_value(97, MOBIUS) == -1
    assert naive_value(49, MOBIUS_SQUARED) == 0
    assert naive_value(5, ONE) == 1


def test_naive_rejects_nonpositive():
    with pytest.raises(ValueError):
        naive_value(0, MOBIUS)


def test_primes_upto():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_upto(1).tolist() == []
    # growing then shrinking the limit replays from the cache
    assert primes_upto(100)[-1] == 97
    assert primes_upto(10).tolist() == [2, 3, 5, 7]


# --- summatory stream --------------------------------------------------------

def test_summatory_stride_one_first_five():
    states = list(summatory_stream(5, MOBIUS, stride=1))
    assert [(s.n, s.total) for s in states] == [
        (1, 1), (2, 0), (3, -1), (4, -1), (5, -2)
    ]


def test_summatory_single_checkpoint():
    (state,) = summatory_stream(10, MOBIUS, stride=10)
    assert (state.n, state.total) == (10, -1)
    (state,) = summatory_stream(10, LIOUVILLE, stride=10)
    assert (state.n, state.total) == (10, 0)


def test_summatory_final_emission_off_stride():
    states = list(summatory_stream(25, LIOUVILLE, stride=10))
    assert [s.n for s in states] == [10, 20, 25]


def test_summatory_one_kind_counts():
    states = list(summatory_stream(7, ONE, stride=3))
    assert [(s.n, s.total) for s in states] == [(3, 3), (6, 6), (7, 7)]


def test_summatory_telescopes_to_pointwise():
    seg = sieve_segment(1, 500, LIOUVILLE)
    states = list(summatory_stream(500, LIOUVILLE, stride=1))
    prev = 0
    for state, value in zip(states, seg.values, strict=True):
        assert state.total - prev == int(value)
        prev = state.total


def test_summatory_segment_boundaries_are_invisible():
    # identical emissions regardless of how the range is cut into segments
    base = [(s.n, s.total) for s in summatory_stream(2500, MOBIUS, stride=7)]
    for capacity in (997, 1000, 2500):
        cut = [
            (s.n, s.total)
            for s in summatory_stream(2500, MOBIUS, stride=7,
                                      segment_capacity=capacity)
        ]
        assert cut == base


# --- independent oracle ------------------------------------------------------

@pytest.fixture(scope="module")
def spf_million():
    return spf_pointwise(1_000_000)


def test_pointwise_matches_spf_oracle_to_a_million(spf_million):
    mu, lam = spf_million
    mu_arr = np.array(mu[1:], dtype=np.int8)
    lam_arr = np.array(lam[1:], dtype=np.int8)
    lo = 1
    while lo <= 1_000_000:
        hi = min(lo + DEFAULT_SEGMENT_CAPACITY - 1, 1_000_000)
        assert np.array_equal(
            sieve_segment(lo, hi, MOBIUS).values, mu_arr[lo - 1 : hi]
        )
        assert np.array_equal(
            sieve_segment(lo, hi, LIOUVILLE).values, lam_arr[lo - 1 : hi]
        )
        lo = hi + 1


def test_summatory_matches_spf_oracle(spf_million):
    mu, lam = spf_million
    expected_m = {}
    expected_l = {}
    total_m = total_l = 0
    for n in range(1, 1_000_001):
        total_m += mu[n]
        total_l += lam[n]
        if n % 10_000 == 0:
            expected_m[n] = total_m
            expected_l[n] = total_l
    assert expected_m[10_000] == -23
    assert expected_l[10_000] == -94
    assert expected_m[1_000_000] == 212
    assert expected_l[1_000_000] == -530
    for state in summatory_stream(1_000_000, MOBIUS, stride=10_000):
        assert state.total == expected_m[state.n]
    for state in summatory_stream(1_000_000, LIOUVILLE, stride=10_000):
        assert state.total == expected_l[state.n]


def test_mobius_squared_is_abs_mobius():
    seg_mu = sieve_segment(1, 30_000, MOBIUS)
    seg_sq = sieve_segment(1, 30_000, MOBIUS_SQUARED)
    assert np.array_equal(np.abs(seg_mu.values), seg_sq.values)


def test_offset_window_matches_naive():
    # a window far from 1 exercises the first-multiple offset arithmetic
    lo, hi = 999_983, 1_000_113
    for kind in ALL_KINDS:
        seg = sieve_segment(lo, hi, kind)
        for n in range(lo, hi + 1):
            assert int(seg.values[n - lo]) == naive_value(n, kind), (kind, n)


# --- error handling ----------------------------------------------------------

def test_segment_rejects_lo_below_one():
    with pytest.raises(ValueError, match="start at 1"):
        sieve_segment(0, 10, MOBIUS)


def test_segment_rejects_empty_range():
    with pytest.raises(ValueError, match="empty segment"):
        sieve_segment(10, 9, MOBIUS)


def test_segment_rejects_overlong_range():
    with pytest.raises(ValueError, match="exceeds capacity"):
        sieve_segment(1, 1001, MOBIUS, segment_capacity=1000)


def test_stream_rejects_bad_arguments():
    with pytest.raises(ValueError):
        list(summatory_stream(0, MOBIUS))
    with pytest.raises(ValueError):
        list(summatory_stream(10, MOBIUS, stride=0))


# --- properties --------------------------------------------------------------

@given(
    n_max=st.integers(min_value=2, max_value=2500),
    data=st.data(),
)
@settings(max_examples=30, deadline=None)
def test_segment_split_concatenation(n_max, data):
    kind = data.draw(st.sampled_from(ALL_KINDS))
    cut = data.draw(st.integers(min_value=1, max_value=n_max - 1))
    whole = sieve_segment(1, n_max, kind).values
    left = sieve_segment(1, cut, kind).values
    right = sieve_segment(cut + 1, n_max, kind).values
    assert np.array_equal(np.concatenate([left, right]), whole)
