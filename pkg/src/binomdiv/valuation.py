"""Prime generation and exact p-adic valuation arithmetic.

Everything in this module is exact: integers, or rationals in lowest
terms (``fractions.Fraction``).  No floating point enters any
computation; the only float ever returned is the ``INFINITE`` marker
for the valuation of 0.

Valuations of factorials use Legendre's formula

    nu_p(m!) = sum_{i>=1} floor(m / p^i)

computed by iterated division ``q <- q // p``, so no power ``p^i`` is
ever materialized and no intermediate exceeds ``m``.  The independent
cross-check is Kummer's theorem: ``nu_p(C(m, k))`` equals the number of
carries when adding ``k`` and ``m - k`` in base ``p``.

All public operations are pure functions of their inputs.  The only
module-level state is a grow-only cache of sieved primes used by
``primes_upto``; it is invisible to callers (results never depend on
cache state) and each worker process owns its own copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Union

import numpy as np

from .errors import ResourceLimitError

#: Valuation of 0; compares greater than every finite valuation.
INFINITE = math.inf

#: Hard ceiling for sieve limits (memory guard).
SIEVE_LIMIT = 2**31

#: Largest denominator accepted by the vectorized lemma fuzzer; keeps
#: every int64 intermediate (numerator*denominator products) exact.
FUZZ_MAX_DEN = 10**9

_SEGMENT = 1 << 22

Valuation = Union[int, float]


# ---------------------------------------------------------------------------
# primes

@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes <= ``limit``, strictly ascending.

    ``primes`` is a read-only int64 array so it can be shared freely
    across workers and sliced without copying.  Equality is identity
    (array-valued fields do not support element comparison sanely);
    compare ``as_list()`` when values matter.
    """

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.shape[0])

    def __iter__(self) -> Iterator[int]:
        return iter(self.as_list())

    def as_list(self) -> list[int]:
        return self.primes.tolist()


def _segmented_sieve(limit: int, segment: int = _SEGMENT) -> np.ndarray:
    """Primes <= limit via a segmented sieve of Eratosthenes."""
    if limit < 2:
        out = np.empty(0, dtype=np.int64)
        out.flags.writeable = False
        return out
    root = math.isqrt(limit)
    base_flags = np.ones(root + 1, dtype=bool)
    base_flags[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base_flags[p]:
            base_flags[p * p :: p] = False
    base = np.flatnonzero(base_flags)
    chunks = [base.astype(np.int64)]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base.tolist():
            start = ((lo + p - 1) // p) * p
            if start < hi:
                flags[start - lo :: p] = False
        chunks.append((np.flatnonzero(flags) + lo).astype(np.int64))
        lo = hi
    out = np.concatenate(chunks)
    out.flags.writeable = False
    return out


_cached_primes = np.empty(0, dtype=np.int64)
_cached_limit = 1


def primes_upto(limit: int) -> np.ndarray:
    """Read-only ascending array of all primes <= limit (cached)."""
    global _cached_primes, _cached_limit
    if limit < 0:
        raise ValueError(f"limit must be nonnegative, got {limit}")
    if limit > SIEVE_LIMIT:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds the {SIEVE_LIMIT} memory guard"
        )
    if limit > _cached_limit:
        # Grow geometrically so ascending request patterns stay O(n log n).
        new_limit = min(max(limit, 2 * _cached_limit, 1 << 16), SIEVE_LIMIT)
        _cached_primes = _segmented_sieve(new_limit)
        _cached_limit = new_limit
    k = int(np.searchsorted(_cached_primes, limit, side="right"))
    return _cached_primes[:k]


def sieve(limit: int) -> PrimeTable:
    """All primes <= limit, ascending.

    Raises ``ResourceLimitError`` for limits beyond ``SIEVE_LIMIT``.
    """
    return PrimeTable(limit, primes_upto(limit))


def factorize(m: int) -> list[tuple[int, int]]:
    """Prime factorization of m >= 1 as ascending (prime, exponent) pairs.

    Trial division against the shared prime cache; intended for
    sieve-scale inputs (isqrt(m) must stay below ``SIEVE_LIMIT``).
    """
    if m < 1:
        raise ValueError(f"cannot factor {m}; argument must be >= 1")
    out: list[tuple[int, int]] = []
    rest = m
    for p in primes_upto(math.isqrt(m)).tolist():
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out.append((p, e))
    if rest > 1:
        out.append((rest, 1))
    return out


# ---------------------------------------------------------------------------
# valuations

def nu_int(m: int, p: int) -> Valuation:
    """Largest k with p^k | m, by repeated exact division.

    Returns ``INFINITE`` for m == 0.  The sign of m is ignored.
    Primality of p is the caller's responsibility: callers draw p from a
    prime table, and a per-call check would dominate the hot loops.
    """
    if m == 0:
        return INFINITE
    m = abs(m)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def nu_factorial(m: int, p: int) -> int:
    """nu_p(m!) by Legendre's formula, as an iterated-division sum."""
    if m < 0:
        raise ValueError(f"factorial argument must be >= 0, got {m}")
    total = 0
    q = m // p
    while q:
        total += q
        q //= p
    return total


def nu_factorial_over_primes(m: int, primes: np.ndarray) -> np.ndarray:
    """nu_p(m!) for every p in an ascending prime array, vectorized.

    Level i contributes only for primes <= m^(1/i), and floor(m/p^i) is
    nonincreasing in p, so the live entries always form a shrinking
    prefix of the array.
    """
    out = np.zeros(primes.shape[0], dtype=np.int64)
    k = int(np.searchsorted(primes, m, side="right"))
    q = m // primes[:k]
    while k:
        out[:k] += q
        q = q // primes[:k]
        k = int(np.count_nonzero(q))
        q = q[:k]
    return out


def kummer_binomial_valuation(m: int, k: int, p: int) -> int:
    """nu_p(C(m, k)) as the carry count of adding k and m-k in base p.

    Independent of the Legendre path; used only to cross-check it.
    """
    if k < 0 or k > m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    r, s = k, m - k
    carries = 0
    carry = 0
    while r or s or carry:
        carry = 1 if (r % p) + (s % p) + carry >= p else 0
        carries += carry
        r //= p
        s //= p
    return carries


# ---------------------------------------------------------------------------
# exact rationals

def rational_floor(q: Fraction) -> int:
    """Mathematical floor of an exact rational (floor(-1/2) == -1)."""
    return q.numerator // q.denominator


def fractional_part(q: Fraction) -> Fraction:
    """{q} = q - floor(q), an exact rational in [0, 1)."""
    return Fraction(q) - rational_floor(q)


class Lemma1Result(NamedTuple):
    lhs: int
    rhs: int
    holds: bool


def lemma1_holds(x: Fraction, y: Fraction) -> Lemma1Result:
    """Check floor(2x) + floor(y) >= floor(x) + floor(x-y) + floor(2y).

    The inequality holds for all real x, y (both sides of
    2x + y = x + (x - y) + 2y lose at most the fractional parts); any
    ``holds=False`` result is an implementation bug.  Inputs are exact
    rationals; Python ints also work since they expose
    numerator/denominator.
    """
    xn, xd = x.numerator, x.denominator
    yn, yd = y.numerator, y.denominator
    lhs = (2 * xn) // xd + yn // yd
    rhs = xn // xd + (xn * yd - yn * xd) // (xd * yd) + (2 * yn) // yd
    return Lemma1Result(lhs, rhs, lhs >= rhs)


class LemmaFuzzReport(NamedTuple):
    samples: int
    max_den: int
    seed: int
    violations: tuple[tuple[Fraction, Fraction], ...]


def lemma_fuzz(samples: int, max_den: int, seed: int = 42) -> LemmaFuzzReport:
    """Run the floor inequality over seeded pseudo-random rational pairs.

    Draws ``samples`` pairs (x, y) with |numerator| <= max_den and
    1 <= denominator <= max_den, evaluates the five floors with exact
    int64 arithmetic (vectorized), and reports every violating pair;
    the expected count is zero.  A fixed prefix of each run is
    re-evaluated through the scalar ``lemma1_holds`` so the two routes
    cannot drift apart.

    Deterministic: the same (samples, max_den, seed) yields the same
    sample stream and report.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if max_den < 1:
        raise ValueError(f"max_den must be >= 1, got {max_den}")
    if max_den > FUZZ_MAX_DEN:
        raise ResourceLimitError(
            f"max_den {max_den} exceeds the int64-exactness guard {FUZZ_MAX_DEN}"
        )
    rng = np.random.default_rng(seed)
    xn = rng.integers(-max_den, max_den + 1, size=samples, dtype=np.int64)
    xd = rng.integers(1, max_den + 1, size=samples, dtype=np.int64)
    yn = rng.integers(-max_den, max_den + 1, size=samples, dtype=np.int64)
    yd = rng.integers(1, max_den + 1, size=samples, dtype=np.int64)
    lhs = (2 * xn) // xd + yn // yd
    rhs = xn // xd + (xn * yd - yn * xd) // (xd * yd) + (2 * yn) // yd
    bad = np.flatnonzero(lhs < rhs)

    for i in range(min(samples, 256)):
        ref = lemma1_holds(
            Fraction(int(xn[i]), int(xd[i])), Fraction(int(yn[i]), int(yd[i]))
        )
        if ref.lhs != int(lhs[i]) or ref.rhs != int(rhs[i]):
            raise RuntimeError(
                "vectorized lemma engine disagrees with the scalar route at "
                f"sample {i}: {ref} vs ({int(lhs[i])}, {int(rhs[i])})"
            )

    violations = tuple(
        (Fraction(int(xn[i]), int(xd[i])), Fraction(int(yn[i]), int(yd[i])))
        for i in bad.tolist()
    )
    return LemmaFuzzReport(samples, max_den, seed, violations)
