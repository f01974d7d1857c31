"""The central divisibility theorem: claims, proof traces, sweeps.

For positive integers a > b >= 1 and every n >= 1,

    (2bn+1)(2bn+3) C(2bn,bn)  |  3(a-b)(3a-b) C(2an,an) C(an,bn)

which reduces, since gcd(2bn+1, 2bn+3) = 1, to showing that each
modulus divides 3(a-b)(3a-b) * R where

    R(a,b,n) = C(2an,an) C(an,bn) / C(2bn,bn)
             = (2an)! (bn)! / ((an)! ((a-b)n)! (2bn)!)

is itself an integer (every per-level Legendre addend of nu_p(R) is
nonnegative by the floor inequality checked in ``valuation``).

``proof_trace`` replays the per-prime case analysis that proves the
2bn+3 half: with p^alpha || 2bn+3, beta = nu_p(a-b),
gamma = nu_p(3a-b) and tau = max(beta, gamma), either the multiplier
already covers alpha, or (p >= 5) each Legendre level in
(tau, alpha] contributes exactly 1, or p = 3 splits on 9 | n.  No
comparable case analysis is worked out for the 2bn+1 modulus, so its
trace records level data informationally and asserts only the
end-to-end inequality.

Two classic congruences of the same flavor run through the same
valuation engine,

    3 * S_n == 0 (mod 2n+3),   S_n = C(6n,3n)C(3n,n) / (2(2n+1)C(2n,n))
    21 * t_n == 0 (mod 10n+3), t_n = C(15n,5n)C(5n-1,n-1) / ((10n+1)C(3n,n))

the first of which follows from the theorem at (a,b) = (3,1).
"""

from __future__ import annotations

import enum
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import oracle
from .ratio import (
    Certificate,
    DivisibilityClaim,
    FactorialRatio,
    LinearForm,
    binomial_ratio,
    claim_holds,
    is_integral_at,
    ratio_level_term,
    ratio_valuation,
    verify_claim,
)
from .valuation import factorize, nu_int

_I64_MAX = 2**63


@dataclass(frozen=True)
class ParamTriple:
    """(a, b, n) with a > b >= 1 and n >= 1."""

    a: int
    b: int
    n: int

    def __post_init__(self) -> None:
        if self.b < 1 or self.a <= self.b:
            raise ValueError(f"need a > b >= 1, got a={self.a}, b={self.b}")
        if self.n < 1:
            raise ValueError(f"need n >= 1, got n={self.n}")


def _check_pair(a: int, b: int) -> None:
    if b < 1 or a <= b:
        raise ValueError(f"need a > b >= 1, got a={a}, b={b}")


def conjecture_claim(a: int, b: int) -> DivisibilityClaim:
    """The divisibility claim for fixed (a, b), with n left symbolic."""
    _check_pair(a, b)
    if 3 * (a - b) * (3 * a - b) >= _I64_MAX:
        raise OverflowError(f"multiplier 3(a-b)(3a-b) overflows 64 bits at a={a}, b={b}")
    dividend = binomial_ratio(LinearForm(2 * a, 0), LinearForm(a, 0)) * binomial_ratio(
        LinearForm(a, 0), LinearForm(b, 0)
    )
    return DivisibilityClaim(
        divisor_moduli=(LinearForm(2 * b, 1), LinearForm(2 * b, 3)),
        divisor_ratio=binomial_ratio(LinearForm(2 * b, 0), LinearForm(b, 0)),
        multiplier_constants=(3, a - b, 3 * a - b),
        dividend_ratio=dividend,
    )


def conjecture_ratio(a: int, b: int) -> FactorialRatio:
    """R(a,b,n) = C(2an,an)C(an,bn)/C(2bn,bn), the integer-valued core ratio."""
    _check_pair(a, b)
    dividend = binomial_ratio(LinearForm(2 * a, 0), LinearForm(a, 0)) * binomial_ratio(
        LinearForm(a, 0), LinearForm(b, 0)
    )
    return dividend / binomial_ratio(LinearForm(2 * b, 0), LinearForm(b, 0))


def verify_triple(t: ParamTriple) -> Certificate:
    """Certificate for the claim at one (a, b, n); expected to hold.

    A failing verdict would mean an implementation bug, never new
    mathematics, and callers treat it as fatal.
    """
    return verify_claim(conjecture_claim(t.a, t.b), t.n)


def check_ratio_integrality(t: ParamTriple) -> bool:
    """R(a,b,n) is an integer (expected always true)."""
    return is_integral_at(conjecture_ratio(t.a, t.b), t.n).integral


def crt_split_check(t: ParamTriple) -> tuple[Certificate, Certificate]:
    """Split the claim over the coprime moduli 2bn+1 and 2bn+3.

    Returns one certificate per modulus, each over the primes dividing
    that modulus only: required is the prime's exponent in the modulus,
    available is nu_p(3(a-b)(3a-b)) + nu_p(R).  Given that R is
    integral, both certificates hold iff ``verify_triple`` holds.
    """
    a, b, n = t.a, t.b, t.n
    m_plus1 = 2 * b * n + 1
    m_plus3 = 2 * b * n + 3
    if math.gcd(m_plus1, m_plus3) != 1:
        raise ArithmeticError(
            f"gcd(2bn+1, 2bn+3) != 1 at n={n}, b={b}; 64-bit arithmetic is broken"
        )
    ratio = conjecture_ratio(a, b)

    def branch(modulus: int) -> Certificate:
        entries = []
        holds, witness = True, None
        for p, e in factorize(modulus):
            available = (
                nu_int(3, p)
                + nu_int(a - b, p)
                + nu_int(3 * a - b, p)
                + ratio_valuation(ratio, n, p)
            )
            entries.append((p, e, available))
            if available < e and witness is None:
                holds, witness = False, p
        return Certificate(n=n, entries=tuple(entries), holds=holds, witness=witness)

    return branch(m_plus1), branch(m_plus3)


# ---------------------------------------------------------------------------
# proof traces

class ModulusSide(enum.Enum):
    TWO_BN_PLUS_1 = "2bn+1"
    TWO_BN_PLUS_3 = "2bn+3"


class TraceBranch(enum.Enum):
    MULTIPLIER_COVERS = "multiplier-covers"
    LEVEL_ANALYSIS = "level-analysis"
    NINE_DIVIDES_N = "nine-divides-n"
    OMITTED_BRANCH_NUMERIC = "omitted-branch-numeric"


@dataclass(frozen=True)
class ProofTrace:
    """Executable replay of the per-prime case analysis for one (a,b,n,p).

    ``levels`` lists (i, per-level Legendre addend of nu_p(R)) for the
    levels the analysis constrains (asserted == 1), or informational
    levels 1..alpha for the 2bn+1 modulus where no pattern is asserted.
    beta/gamma/tau are None on the 2bn+1 side, which computes alpha only.
    """

    triple: ParamTriple
    p: int
    modulus_side: ModulusSide
    modulus_value: int
    alpha: int
    beta: int | None
    gamma: int | None
    tau: int | None
    branch: TraceBranch
    levels: tuple[tuple[int, int], ...]
    satisfied: bool
    failures: tuple[str, ...]


def proof_trace(t: ParamTriple, p: int) -> ProofTrace:
    """Case analysis for p | 2bn+3; every assertion is expected to pass."""
    a, b, n = t.a, t.b, t.n
    modulus = 2 * b * n + 3
    if modulus % p:
        raise ValueError(f"p={p} does not divide 2bn+3 = {modulus}")
    alpha = nu_int(modulus, p)
    beta = nu_int(a - b, p)
    gamma = nu_int(3 * a - b, p)
    tau = max(beta, gamma)
    ratio = conjecture_ratio(a, b)
    nu_ratio = ratio_valuation(ratio, n, p)
    multiplier_nu = nu_int(3, p) + beta + gamma

    failures: list[str] = []
    levels: tuple[tuple[int, int], ...] = ()
    if alpha <= tau:
        branch = TraceBranch.MULTIPLIER_COVERS
    elif p >= 5:
        branch = TraceBranch.LEVEL_ANALYSIS
        levels = tuple(
            (i, ratio_level_term(ratio, n, p, i)) for i in range(tau + 1, alpha + 1)
        )
        for i, term in levels:
            if term != 1:
                failures.append(f"level {i} term is {term}, expected exactly 1")
        if math.gcd(p, n) != 1:
            failures.append(f"gcd({p}, n) != 1 although p >= 5 divides 2bn+3")
        if nu_ratio < alpha - tau:
            failures.append(f"nu_p(R) = {nu_ratio} < alpha - tau = {alpha - tau}")
    elif n % 9 == 0:  # p == 3 from here on (2bn+3 is odd)
        branch = TraceBranch.NINE_DIVIDES_N
        if alpha != 1:
            failures.append(f"9 | n but nu_3(2bn+3) = {alpha} != 1")
    else:
        branch = TraceBranch.LEVEL_ANALYSIS
        levels = tuple(
            (i, ratio_level_term(ratio, n, p, i)) for i in range(tau + 2, alpha + 1)
        )
        for i, term in levels:
            if term != 1:
                failures.append(f"level {i} term is {term}, expected exactly 1")
        if nu_ratio < alpha - tau - 1:
            failures.append(f"nu_3(R) = {nu_ratio} < alpha - tau - 1 = {alpha - tau - 1}")

    if multiplier_nu + nu_ratio < alpha:
        failures.append(
            f"nu_p(3(a-b)(3a-b)R) = {multiplier_nu + nu_ratio} < alpha = {alpha}"
        )
    return ProofTrace(
        triple=t,
        p=p,
        modulus_side=ModulusSide.TWO_BN_PLUS_3,
        modulus_value=modulus,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        tau=tau,
        branch=branch,
        levels=levels,
        satisfied=not failures,
        failures=tuple(failures),
    )


def omitted_branch_trace(t: ParamTriple, p: int) -> ProofTrace:
    """Numeric check for p | 2bn+1: only the final inequality is asserted.

    The case analysis is not replicated for this modulus; per-level
    data is recorded for inspection without asserting any pattern.
    """
    a, b, n = t.a, t.b, t.n
    modulus = 2 * b * n + 1
    if modulus % p:
        raise ValueError(f"p={p} does not divide 2bn+1 = {modulus}")
    alpha = nu_int(modulus, p)
    ratio = conjecture_ratio(a, b)
    nu_ratio = ratio_valuation(ratio, n, p)
    multiplier_nu = nu_int(3, p) + nu_int(a - b, p) + nu_int(3 * a - b, p)
    levels = tuple((i, ratio_level_term(ratio, n, p, i)) for i in range(1, alpha + 1))
    failures: list[str] = []
    if multiplier_nu + nu_ratio < alpha:
        failures.append(
            f"nu_p(3(a-b)(3a-b)R) = {multiplier_nu + nu_ratio} < alpha = {alpha}"
        )
    return ProofTrace(
        triple=t,
        p=p,
        modulus_side=ModulusSide.TWO_BN_PLUS_1,
        modulus_value=modulus,
        alpha=alpha,
        beta=None,
        gamma=None,
        tau=None,
        branch=TraceBranch.OMITTED_BRANCH_NUMERIC,
        levels=levels,
        satisfied=not failures,
        failures=tuple(failures),
    )


def traces_for_modulus(t: ParamTriple, side: ModulusSide) -> list[ProofTrace]:
    """One trace per prime factor of the selected modulus."""
    if side is ModulusSide.TWO_BN_PLUS_3:
        modulus = 2 * t.b * t.n + 3
        return [proof_trace(t, p) for p, _ in factorize(modulus)]
    modulus = 2 * t.b * t.n + 1
    return [omitted_branch_trace(t, p) for p, _ in factorize(modulus)]


# ---------------------------------------------------------------------------
# the S_n and t_n congruences

def s_binomial_ratio() -> FactorialRatio:
    """C(6n,3n)C(3n,n)/C(2n,n), the factorial part of S_n."""
    return (
        binomial_ratio(LinearForm(6, 0), LinearForm(3, 0))
        * binomial_ratio(LinearForm(3, 0), LinearForm(1, 0))
        / binomial_ratio(LinearForm(2, 0), LinearForm(1, 0))
    )


def t_binomial_ratio() -> FactorialRatio:
    """C(15n,5n)C(5n-1,n-1)/C(3n,n), the factorial part of t_n."""
    return (
        binomial_ratio(LinearForm(15, 0), LinearForm(5, 0))
        * binomial_ratio(LinearForm(5, -1), LinearForm(1, -1))
        / binomial_ratio(LinearForm(3, 0), LinearForm(1, 0))
    )


def s_integrality_claim() -> DivisibilityClaim:
    """S_n is an integer: 2(2n+1)C(2n,n) | C(6n,3n)C(3n,n)."""
    return DivisibilityClaim(
        divisor_moduli=(LinearForm(0, 2), LinearForm(2, 1)),
        divisor_ratio=binomial_ratio(LinearForm(2, 0), LinearForm(1, 0)),
        multiplier_constants=(),
        dividend_ratio=binomial_ratio(LinearForm(6, 0), LinearForm(3, 0))
        * binomial_ratio(LinearForm(3, 0), LinearForm(1, 0)),
    )


def t_integrality_claim() -> DivisibilityClaim:
    """t_n is an integer: (10n+1)C(3n,n) | C(15n,5n)C(5n-1,n-1)."""
    return DivisibilityClaim(
        divisor_moduli=(LinearForm(10, 1),),
        divisor_ratio=binomial_ratio(LinearForm(3, 0), LinearForm(1, 0)),
        multiplier_constants=(),
        dividend_ratio=binomial_ratio(LinearForm(15, 0), LinearForm(5, 0))
        * binomial_ratio(LinearForm(5, -1), LinearForm(1, -1)),
    )


def s_valuation(n: int, p: int) -> int:
    """nu_p(S_n), computed from valuations alone (may be negative)."""
    return ratio_valuation(s_binomial_ratio(), n, p) - nu_int(2, p) - nu_int(2 * n + 1, p)


def t_valuation(n: int, p: int) -> int:
    """nu_p(t_n), computed from valuations alone (may be negative)."""
    return ratio_valuation(t_binomial_ratio(), n, p) - nu_int(10 * n + 1, p)


def check_s_congruence(n: int) -> bool:
    """3*S_n == 0 (mod 2n+3), via per-prime-power valuations.

    Also asserts that S_n itself is an integer.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    holds, _ = claim_holds(s_integrality_claim(), n)
    if not holds:
        return False
    return all(
        nu_int(3, q) + s_valuation(n, q) >= e for q, e in factorize(2 * n + 3)
    )


def check_t_congruence(n: int) -> bool:
    """21*t_n == 0 (mod 10n+3), via per-prime-power valuations.

    Also asserts that t_n itself is an integer.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    holds, _ = claim_holds(t_integrality_claim(), n)
    if not holds:
        return False
    return all(
        nu_int(21, q) + t_valuation(n, q) >= e for q, e in factorize(10 * n + 3)
    )


def minimal_multiplier(t: ParamTriple) -> int:
    """Smallest constant M with divisor | M * dividend-binomials, exactly.

    M = D / gcd(D, B) for D = (2bn+1)(2bn+3)C(2bn,bn) and
    B = C(2an,an)C(an,bn), computed through the independent big-integer
    path.  The theorem guarantees M | 3(a-b)(3a-b); a violation is
    surfaced as ``IntegrityError``.
    """
    a, b, n = t.a, t.b, t.n
    divisor = (2 * b * n + 1) * (2 * b * n + 3) * oracle.big_binomial(2 * b * n, b * n)
    dividend = oracle.big_binomial(2 * a * n, a * n) * oracle.big_binomial(a * n, b * n)
    m_min = divisor // math.gcd(divisor, dividend)
    bound = 3 * (a - b) * (3 * a - b)
    if bound % m_min:
        from .errors import IntegrityError

        raise IntegrityError(
            f"minimal multiplier {m_min} does not divide 3(a-b)(3a-b) = {bound} "
            f"at {t}; the divisibility theorem would be false"
        )
    return m_min


# ---------------------------------------------------------------------------
# parameter sweeps

@dataclass(frozen=True)
class SweepReport:
    a_max: int
    b_max: int
    n_max: int
    checked: int
    violations: tuple[tuple[ParamTriple, int], ...]
    seconds: float


def sweep_pairs(a_max: int, b_max: int) -> list[tuple[int, int]]:
    """All (a, b) with 1 <= b < a <= a_max and b <= b_max, lexicographic."""
    return [
        (a, b) for a in range(2, a_max + 1) for b in range(1, min(a - 1, b_max) + 1)
    ]


def _verify_cell(claim_cache: dict, a: int, b: int, n: int) -> int | None:
    claim = claim_cache.get((a, b))
    if claim is None:
        claim = claim_cache[(a, b)] = conjecture_claim(a, b)
    holds, witness = claim_holds(claim, n)
    return None if holds else witness


def _sweep_chunk(payload) -> tuple[int, list[tuple[int, int, int, int]]]:
    """Worker: verify a chunk of the grid, return (checked, violations)."""
    kind, body, n_max = payload
    claim_cache: dict = {}
    checked = 0
    violations: list[tuple[int, int, int, int]] = []
    if kind == "pairs":
        for a, b in body:
            for n in range(1, n_max + 1):
                witness = _verify_cell(claim_cache, a, b, n)
                checked += 1
                if witness is not None:
                    violations.append((a, b, n, witness))
    else:
        for a, b, n in body:
            witness = _verify_cell(claim_cache, a, b, n)
            checked += 1
            if witness is not None:
                violations.append((a, b, n, witness))
    return checked, violations


def run_sweep(
    a_max: int,
    b_max: int,
    n_max: int,
    jobs: int = 1,
    sample: int | None = None,
    seed: int = 42,
) -> SweepReport:
    """Verify the claim over the (a, b, n) box, optionally in parallel.

    Exhaustive by default.  With ``sample``, draws that many triples
    from the box without replacement using the given seed.  Workers
    partition the grid; results are merged and sorted by (a, b, n) so
    the report is identical for any worker count.
    """
    if min(a_max, b_max, n_max) < 1:
        raise ValueError("a_max, b_max and n_max must all be >= 1")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    started = time.perf_counter()
    pairs = sweep_pairs(a_max, b_max)

    payloads: list[tuple] = []
    if sample is not None:
        total = len(pairs) * n_max
        count = min(sample, total)
        rng = random.Random(seed)
        indices = sorted(rng.sample(range(total), count)) if count else []
        triples = [
            (*pairs[i // n_max], i % n_max + 1) for i in indices
        ]
        step = max(1, math.ceil(len(triples) / (jobs * 4))) if triples else 1
        payloads = [
            ("triples", tuple(triples[i : i + step]), n_max)
            for i in range(0, len(triples), step)
        ]
    elif pairs:
        # Deal pairs round-robin, heaviest (largest b) first, for balance.
        n_chunks = min(len(pairs), jobs * 4)
        buckets: list[list[tuple[int, int]]] = [[] for _ in range(n_chunks)]
        for i, pair in enumerate(sorted(pairs, key=lambda ab: (-ab[1], ab[0]))):
            buckets[i % n_chunks].append(pair)
        payloads = [("pairs", tuple(bucket), n_max) for bucket in buckets]

    if jobs == 1 or len(payloads) <= 1:
        outcomes = [_sweep_chunk(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_sweep_chunk, payloads))

    checked = sum(c for c, _ in outcomes)
    raw = sorted(v for _, vs in outcomes for v in vs)
    violations = tuple((ParamTriple(a, b, n), w) for a, b, n, w in raw)
    return SweepReport(
        a_max=a_max,
        b_max=b_max,
        n_max=n_max,
        checked=checked,
        violations=violations,
        seconds=time.perf_counter() - started,
    )
