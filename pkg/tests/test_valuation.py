"""Tests for prime generation, valuations and exact rational floors."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binomdiv.errors import ResourceLimitError
from binomdiv.valuation import (
    INFINITE,
    factorize,
    fractional_part,
    kummer_binomial_valuation,
    lemma1_holds,
    lemma_fuzz,
    nu_factorial,
    nu_factorial_over_primes,
    nu_int,
    primes_upto,
    rational_floor,
    sieve,
    _segmented_sieve,
)


def trial_division_primes(limit: int) -> list[int]:
    """Independent oracle: primes by brute-force trial division."""
    out = []
    for m in range(2, limit + 1):
        if all(m % d for d in range(2, math.isqrt(m) + 1)):
            out.append(m)
    return out


rationals = st.builds(
    Fraction,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=1, max_value=10**6),
)


# ---------------------------------------------------------------------------
# sieve

def test_sieve_small_examples():
    assert sieve(1).as_list() == []
    assert sieve(0).as_list() == []
    assert sieve(2).as_list() == [2]
    assert sieve(10).as_list() == [2, 3, 5, 7]
    assert sieve(30).as_list() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sieve_matches_trial_division_up_to_10k():
    assert sieve(10_000).as_list() == trial_division_primes(10_000)


def test_sieve_strictly_increasing_and_prime():
    table = sieve(5000)
    primes = table.as_list()
    assert table.limit == 5000
    assert primes == sorted(set(primes))
    assert len(table) == len(primes)


@pytest.mark.parametrize("segment", [1, 7, 97, 1024])
def test_segmented_sieve_segment_boundaries(segment):
    got = _segmented_sieve(2000, segment=segment).tolist()
    assert got == trial_division_primes(2000)


def test_sieve_limit_guard():
    with pytest.raises(ResourceLimitError):
        sieve(2**31 + 1)


def test_primes_upto_cache_slices_consistently():
    big = primes_upto(9000).tolist()
    small = primes_upto(100).tolist()
    assert small == [p for p in big if p <= 100]
    assert not primes_upto(9000).flags.writeable


# ---------------------------------------------------------------------------
# integer and factorial valuations

def test_nu_int_examples():
    assert nu_int(12, 2) == 2
    assert nu_int(7, 5) == 0
    assert nu_int(27, 3) == 3
    assert nu_int(1, 17) == 0


def test_nu_int_of_zero_is_infinite():
    assert nu_int(0, 7) == INFINITE
    assert nu_int(0, 7) > 10**18


def test_nu_factorial_examples():
    assert nu_factorial(0, 7) == 0
    assert nu_factorial(1, 7) == 0
    assert nu_factorial(10, 2) == 8
    assert nu_factorial(25, 5) == 6
    assert nu_factorial(6, 7) == 0


def test_nu_factorial_rejects_negative():
    with pytest.raises(ValueError):
        nu_factorial(-1, 3)


def test_nu_factorial_matches_incremental_counting():
    # Legendre's sum vs multiplying out m! factor by factor.
    for p in [2, 3, 5, 7, 11, 13, 29]:
        running = 0
        for m in range(1, 300):
            running += nu_int(m, p)
            assert nu_factorial(m, p) == running


def test_nu_factorial_over_primes_matches_scalar():
    primes = primes_upto(200)
    for m in [0, 1, 2, 17, 96, 97, 1000, 12345]:
        batch = nu_factorial_over_primes(m, primes)
        assert batch.dtype.name == "int64"
        assert batch.tolist() == [nu_factorial(m, int(p)) for p in primes]


def test_factorize_examples():
    assert factorize(1) == []
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(97) == [(97, 1)]
    assert factorize(2 * 3**4 * 101) == [(2, 1), (3, 4), (101, 1)]
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_reconstructs_argument():
    for m in range(1, 2000):
        product = 1
        for p, e in factorize(m):
            product *= p**e
        assert product == m


# ---------------------------------------------------------------------------
# Kummer carries

def test_kummer_examples():
    assert kummer_binomial_valuation(4, 2, 2) == 1
    assert kummer_binomial_valuation(9, 0, 3) == 0
    assert kummer_binomial_valuation(8, 1, 2) == 3


def test_kummer_rejects_bad_k():
    with pytest.raises(ValueError):
        kummer_binomial_valuation(4, 5, 2)
    with pytest.raises(ValueError):
        kummer_binomial_valuation(4, -1, 2)


def test_kummer_equals_legendre_difference_small():
    for p in (2, 3, 5):
        table = [nu_factorial(m, p) for m in range(121)]
        for m in range(121):
            for k in range(m + 1):
                expected = table[m] - table[k] - table[m - k]
                assert kummer_binomial_valuation(m, k, p) == expected


# ---------------------------------------------------------------------------
# exact rational floors and the floor inequality

def test_floor_and_fraction_examples():
    assert rational_floor(Fraction(7, 2)) == 3
    assert fractional_part(Fraction(7, 2)) == Fraction(1, 2)
    assert rational_floor(Fraction(-1, 2)) == -1
    assert fractional_part(Fraction(-1, 2)) == Fraction(1, 2)
    assert rational_floor(Fraction(5, 1)) == 5
    assert fractional_part(Fraction(5, 1)) == 0


@given(rationals)
def test_floor_fraction_decomposition(q):
    assert rational_floor(q) + fractional_part(q) == q
    assert 0 <= fractional_part(q) < 1


def test_lemma1_examples():
    assert lemma1_holds(Fraction(0), Fraction(0)) == (0, 0, True)
    assert lemma1_holds(Fraction(1, 2), Fraction(1, 2)) == (1, 1, True)
    assert lemma1_holds(Fraction(3, 5), Fraction(1, 5)) == (1, 0, True)


@given(rationals, rationals)
def test_lemma1_always_holds(x, y):
    result = lemma1_holds(x, y)
    assert result.holds
    # the two sides really are the stated floor sums
    assert result.lhs == math.floor(2 * x) + math.floor(y)
    assert result.rhs == math.floor(x) + math.floor(x - y) + math.floor(2 * y)


def test_lemma_fuzz_small_run_and_determinism():
    first = lemma_fuzz(5000, 1000, seed=7)
    second = lemma_fuzz(5000, 1000, seed=7)
    assert first == second
    assert first.violations == ()
    assert lemma_fuzz(1, 10, seed=0).violations == ()


def test_lemma_fuzz_different_seeds_allowed():
    assert lemma_fuzz(1000, 50, seed=1).violations == ()
    assert lemma_fuzz(1000, 50, seed=2).violations == ()


def test_lemma_fuzz_argument_guards():
    with pytest.raises(ValueError):
        lemma_fuzz(0, 10)
    with pytest.raises(ValueError):
        lemma_fuzz(10, 0)
    with pytest.raises(ResourceLimitError):
        lemma_fuzz(10, 10**9 + 1)
