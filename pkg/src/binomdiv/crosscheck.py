"""Cross-validation suites: the valuation engine vs independent routes.

Each suite pits a fast path against a slow, structurally unrelated one
(trial division, incremental factor counting, carry counting, exact
big-integer arithmetic) over a desk-scale box and reports any
disagreement.  The suites are what ``binomdiv oracle-check`` runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import oracle
from .theorem import (
    ParamTriple,
    check_s_congruence,
    check_t_congruence,
    conjecture_claim,
    minimal_multiplier,
    sweep_pairs,
)
from .ratio import claim_holds
from .valuation import (
    fractional_part,
    kummer_binomial_valuation,
    lemma1_holds,
    nu_factorial,
    nu_int,
    primes_upto,
    rational_floor,
    sieve,
)


class SuiteResult(NamedTuple):
    name: str
    checked: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _trial_division_primes(limit: int) -> list[int]:
    out = []
    for m in range(2, limit + 1):
        d = 2
        while d * d <= m:
            if m % d == 0:
                break
            d += 1
        else:
            out.append(m)
    return out


def suite_sieve(limit: int = 2000) -> SuiteResult:
    """Sieve output equals brute-force trial-division enumeration."""
    failures = []
    expected = _trial_division_primes(limit)
    got = sieve(limit).as_list()
    if got != expected:
        failures.append(f"sieve({limit}) disagrees with trial division")
    return SuiteResult("sieve-vs-trial-division", limit, tuple(failures))


def suite_legendre_incremental(m_max: int = 500, p_max: int = 50) -> SuiteResult:
    """nu_p(m!) equals the running sum of nu_p(j) for j = 1..m."""
    failures = []
    checked = 0
    for p in primes_upto(p_max).tolist():
        running = 0
        for m in range(1, m_max + 1):
            running += nu_int(m, p)
            checked += 1
            if nu_factorial(m, p) != running:
                failures.append(f"nu_{p}({m}!) != incremental count {running}")
    return SuiteResult("legendre-vs-incremental", checked, tuple(failures))


def suite_kummer(m_max: int = 200, primes: tuple[int, ...] = (2, 3, 5, 7, 11)) -> SuiteResult:
    """Carry counts equal Legendre differences for C(m, k)."""
    failures = []
    checked = 0
    for p in primes:
        table = [nu_factorial(m, p) for m in range(m_max + 1)]
        for m in range(m_max + 1):
            for k in range(m + 1):
                checked += 1
                if kummer_binomial_valuation(m, k, p) != table[m] - table[k] - table[m - k]:
                    failures.append(f"Kummer disagrees at C({m},{k}), p={p}")
    return SuiteResult("kummer-vs-legendre", checked, tuple(failures))


def suite_rational_floor(samples: int = 20_000, seed: int = 42) -> SuiteResult:
    """floor/frac decomposition and the floor inequality on random rationals."""
    failures = []
    rng = np.random.default_rng(seed)
    nums = rng.integers(-10**6, 10**6 + 1, size=(samples, 2))
    dens = rng.integers(1, 10**6 + 1, size=(samples, 2))
    for i in range(samples):
        x = Fraction(int(nums[i, 0]), int(dens[i, 0]))
        y = Fraction(int(nums[i, 1]), int(dens[i, 1]))
        if not (0 <= fractional_part(x) < 1 and rational_floor(x) + fractional_part(x) == x):
            failures.append(f"floor/frac decomposition broken for {x}")
        if not lemma1_holds(x, y).holds:
            failures.append(f"floor inequality violated at ({x}, {y})")
    return SuiteResult("rational-floor-laws", samples, tuple(failures))


def suite_claims_vs_oracle(a_max: int = 5, n_max: int = 10) -> SuiteResult:
    """Valuation verdicts equal exact big-integer divisibility."""
    failures = []
    checked = 0
    for a, b in sweep_pairs(a_max, a_max - 1):
        claim = conjecture_claim(a, b)
        for n in range(1, n_max + 1):
            checked += 1
            holds, _ = claim_holds(claim, n)
            divisor = (
                (2 * b * n + 1)
                * (2 * b * n + 3)
                * oracle.big_binomial(2 * b * n, b * n)
            )
            dividend = (
                3
                * (a - b)
                * (3 * a - b)
                * oracle.big_binomial(2 * a * n, a * n)
                * oracle.big_binomial(a * n, b * n)
            )
            if holds != oracle.divides(divisor, dividend):
                failures.append(f"verdict mismatch at a={a} b={b} n={n}")
            elif not holds:
                failures.append(f"claim unexpectedly fails at a={a} b={b} n={n}")
    return SuiteResult("claims-vs-bigint", checked, tuple(failures))


def suite_congruences_vs_oracle(s_n_max: int = 30, t_n_max: int = 20) -> SuiteResult:
    """The S_n and t_n congruence checks match exact modular arithmetic."""
    failures = []
    checked = 0
    for n in range(1, s_n_max + 1):
        checked += 1
        by_valuation = check_s_congruence(n)
        by_oracle = (3 * oracle.exact_s(n)) % (2 * n + 3) == 0
        if by_valuation != by_oracle or not by_valuation:
            failures.append(f"S_n congruence mismatch at n={n}")
    for n in range(1, t_n_max + 1):
        checked += 1
        by_valuation = check_t_congruence(n)
        by_oracle = (21 * oracle.exact_t(n)) % (10 * n + 3) == 0
        if by_valuation != by_oracle or not by_valuation:
            failures.append(f"t_n congruence mismatch at n={n}")
    return SuiteResult("congruences-vs-bigint", checked, tuple(failures))


def suite_minimal_multiplier(a_max: int = 5, n_max: int = 5) -> SuiteResult:
    """The exact minimal multiplier always divides 3(a-b)(3a-b)."""
    failures = []
    checked = 0
    for a, b in sweep_pairs(a_max, a_max - 1):
        for n in range(1, n_max + 1):
            checked += 1
            m_min = minimal_multiplier(ParamTriple(a, b, n))
            if (3 * (a - b) * (3 * a - b)) % m_min:
                failures.append(f"minimal multiplier does not divide at a={a} b={b} n={n}")
    return SuiteResult("minimal-multiplier", checked, tuple(failures))


def run_all(seed: int = 42) -> list[SuiteResult]:
    return [
        suite_sieve(),
        suite_legendre_incremental(),
        suite_kummer(),
        suite_rational_floor(seed=seed),
        suite_claims_vs_oracle(),
        suite_congruences_vs_oracle(),
        suite_minimal_multiplier(),
    ]
