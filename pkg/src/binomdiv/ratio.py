"""Symbolic factorial-ratio expressions in one parameter n.

A ``FactorialRatio`` is a product of factorials of affine forms,
``prod ((c_i*n + d_i)!)^(e_i)`` with nonzero integer exponents.  Its
p-adic valuation at a concrete n is a finite signed sum of Legendre
sums, which is how divisibility claims about products of binomial
coefficients are decided without ever constructing the (astronomically
large) integers themselves.

A ``DivisibilityClaim`` asserts, for a given n,

    prod moduli_i(n) * divisor_ratio(n)  |  prod multipliers_j * dividend_ratio(n)

and ``verify_claim`` decides it prime by prime, producing a
``Certificate`` ledger of required vs available exponents.  Only primes
up to max(moduli values, divisor factorial arguments) can impose a
positive requirement, which is what keeps verification feasible at
n ~ 10^6 where the dividend's own primes would number in the millions.

Canonical text form (also documented in the CLI):

    ratio := "1" | term (" " term)*
    term  := "(" form ")!^" exponent
    form  := affine form in n, e.g. "4n", "2n+3", "n-1", "5"

with terms sorted by (coeff, offset) descending and exponents nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .valuation import factorize, nu_factorial, nu_factorial_over_primes, primes_upto

_I64_MAX = 2**63


@dataclass(frozen=True)
class LinearForm:
    """Affine form coeff*n + offset with 64-bit-checked evaluation."""

    coeff: int
    offset: int

    def evaluate(self, n: int) -> int:
        value = self.coeff * n + self.offset
        if not -_I64_MAX < value < _I64_MAX:
            raise OverflowError(f"({self}) at n={n} does not fit in 64 bits")
        return value

    def __str__(self) -> str:
        c, d = self.coeff, self.offset
        if c == 0:
            return str(d)
        s = "n" if c == 1 else ("-n" if c == -1 else f"{c}n")
        if d > 0:
            return f"{s}+{d}"
        if d < 0:
            return f"{s}{d}"
        return s


def _term_key(term: tuple[LinearForm, int]) -> tuple[int, int]:
    form, _ = term
    return (-form.coeff, -form.offset)


@dataclass(frozen=True)
class FactorialRatio:
    """Merged, canonically sorted product of factorial powers.

    Construct through ``from_terms`` (or the ``binomial_ratio`` sugar):
    duplicate forms are merged by summing exponents, zero exponents are
    dropped, and terms are sorted descending by (coeff, offset) so that
    structurally equal ratios compare and hash equal.
    """

    terms: tuple[tuple[LinearForm, int], ...] = ()

    def __post_init__(self) -> None:
        keys = [_term_key(t) for t in self.terms]
        if any(e == 0 for _, e in self.terms) or sorted(set(keys)) != sorted(keys):
            raise ValueError(
                "terms must be merged, zero-exponent-free and unique; "
                "build ratios with FactorialRatio.from_terms"
            )
        if keys != sorted(keys):
            raise ValueError("terms must be sorted by (coeff, offset) descending")

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[LinearForm, int]]) -> "FactorialRatio":
        merged: dict[LinearForm, int] = {}
        for form, exponent in pairs:
            merged[form] = merged.get(form, 0) + exponent
        terms = tuple(
            sorted(((f, e) for f, e in merged.items() if e != 0), key=_term_key)
        )
        return cls(terms)

    def __mul__(self, other: "FactorialRatio") -> "FactorialRatio":
        return FactorialRatio.from_terms(self.terms + other.terms)

    def reciprocal(self) -> "FactorialRatio":
        return FactorialRatio(tuple((f, -e) for f, e in self.terms))

    def __truediv__(self, other: "FactorialRatio") -> "FactorialRatio":
        return self * other.reciprocal()

    def arguments(self, n: int) -> list[int]:
        """Evaluated factorial arguments, each checked nonnegative."""
        return [_argument(form, n) for form, _ in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "1"
        return " ".join(f"({form})!^{e}" for form, e in self.terms)


def binomial_ratio(top: LinearForm, bottom: LinearForm) -> FactorialRatio:
    """C(top, bottom) as top!^1 * bottom!^-1 * (top-bottom)!^-1."""
    diff = LinearForm(top.coeff - bottom.coeff, top.offset - bottom.offset)
    return FactorialRatio.from_terms([(top, 1), (bottom, -1), (diff, -1)])


def _argument(form: LinearForm, n: int) -> int:
    value = form.evaluate(n)
    if value < 0:
        raise ValueError(f"factorial argument ({form}) evaluates to {value} at n={n}")
    return value


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


# ---------------------------------------------------------------------------
# valuation of a ratio

def ratio_valuation(r: FactorialRatio, n: int, p: int) -> int:
    """nu_p of the ratio at n: sum of exponent * nu_p(argument!).

    May be negative; that is exactly what non-integrality looks like.
    """
    _check_n(n)
    return sum(e * nu_factorial(_argument(form, n), p) for form, e in r.terms)


def ratio_level_term(r: FactorialRatio, n: int, p: int, level: int) -> int:
    """The level-``level`` addend of the Legendre sum for the ratio.

    This is sum_t e_t * floor(arg_t / p^level), the bracketed per-level
    term whose sign and size carry the content of the divisibility
    proofs; ``ratio_valuation`` is the sum of these over all levels.
    """
    _check_n(n)
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    q = p**level
    return sum(e * (_argument(form, n) // q) for form, e in r.terms)


def ratio_level_terms(r: FactorialRatio, n: int, p: int) -> list[int]:
    """All nontrivial per-level addends (levels 1, 2, ... until empty)."""
    _check_n(n)
    exponents = [e for _, e in r.terms]
    quotients = [a // p for a in r.arguments(n)]
    out: list[int] = []
    while any(quotients):
        out.append(sum(e * q for e, q in zip(exponents, quotients)))
        quotients = [q // p for q in quotients]
    return out


def ratio_valuation_over_primes(
    r: FactorialRatio, n: int, primes: np.ndarray
) -> np.ndarray:
    """Vectorized ``ratio_valuation`` over an ascending prime array."""
    _check_n(n)
    args = r.arguments(n)
    # nu_p(a!) < a, so this bounds every partial sum the int64 engine sees
    if sum(abs(e) * a for (_, e), a in zip(r.terms, args)) >= _I64_MAX:
        raise OverflowError("ratio valuations would not fit in 64 bits")
    total = np.zeros(primes.shape[0], dtype=np.int64)
    for (_, e), arg in zip(r.terms, args):
        total += e * nu_factorial_over_primes(arg, primes)
    return total


class IntegralityResult(NamedTuple):
    integral: bool
    witness: int | None  # least prime with negative valuation


def is_integral_at(r: FactorialRatio, n: int) -> IntegralityResult:
    """Whether the ratio evaluates to an integer at n.

    Checks nu_p >= 0 for every prime p up to the largest positive
    factorial argument (larger primes divide nothing on either side).
    This is a per-n check only: it cannot certify integrality for all n.
    """
    _check_n(n)
    args = r.arguments(n)
    bound = max((a for a in args if a > 0), default=0)
    if bound < 2:
        return IntegralityResult(True, None)
    primes = primes_upto(bound)
    vals = ratio_valuation_over_primes(r, n, primes)
    negative = np.flatnonzero(vals < 0)
    if negative.size:
        return IntegralityResult(False, int(primes[negative[0]]))
    return IntegralityResult(True, None)


# ---------------------------------------------------------------------------
# divisibility claims

@dataclass(frozen=True)
class DivisibilityClaim:
    """divisor_moduli * divisor_ratio | multipliers * dividend_ratio, at each n.

    Moduli are affine forms that must evaluate >= 1 for every n >= 1
    (constant factors on the divisor side are coeff-0 forms); multiplier
    constants are positive integers on the dividend side.
    """

    divisor_moduli: tuple[LinearForm, ...]
    divisor_ratio: FactorialRatio
    multiplier_constants: tuple[int, ...]
    dividend_ratio: FactorialRatio

    def __post_init__(self) -> None:
        object.__setattr__(self, "divisor_moduli", tuple(self.divisor_moduli))
        object.__setattr__(self, "multiplier_constants", tuple(self.multiplier_constants))
        for c in self.multiplier_constants:
            if c < 1:
                raise ValueError(f"multiplier constants must be >= 1, got {c}")
        for m in self.divisor_moduli:
            # coeff >= 0 and value at n=1 >= 1 together give >= 1 for all n >= 1
            if m.coeff < 0 or m.coeff + m.offset < 1:
                raise ValueError(f"modulus ({m}) is not >= 1 for all n >= 1")

    def __str__(self) -> str:
        left = "".join(f"({m})" for m in self.divisor_moduli) or "1"
        right = "*".join(str(c) for c in self.multiplier_constants) or "1"
        return f"{left} {self.divisor_ratio} | {right} {self.dividend_ratio}"


@dataclass(frozen=True)
class Certificate:
    """Per-prime ledger for one claim instance.

    ``entries`` lists (prime, required, available) ascending by prime,
    omitting primes with required == 0; ``holds`` is decided over every
    enumerated prime before the omission, and ``witness`` is the least
    prime with available < required when the claim fails.
    """

    n: int
    entries: tuple[tuple[int, int, int], ...]
    holds: bool
    witness: int | None

    @property
    def verdict(self) -> str:
        return "Holds" if self.holds else f"Fails(p={self.witness})"

    def min_margin(self) -> int | None:
        """Smallest available - required over the entries (None if empty)."""
        if not self.entries:
            return None
        return min(available - required for _, required, available in self.entries)


def _claim_valuations(
    claim: DivisibilityClaim, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(primes, required, available) arrays over all primes that matter."""
    _check_n(n)
    moduli_values = [m.evaluate(n) for m in claim.divisor_moduli]
    divisor_args = claim.divisor_ratio.arguments(n)
    claim.dividend_ratio.arguments(n)  # validate nonnegativity up front
    bound = max(moduli_values + divisor_args, default=0)
    primes = primes_upto(bound) if bound >= 2 else primes_upto(0)

    required = ratio_valuation_over_primes(claim.divisor_ratio, n, primes)
    for value in moduli_values:
        for p, e in factorize(value):
            required[int(np.searchsorted(primes, p))] += e

    available = ratio_valuation_over_primes(claim.dividend_ratio, n, primes)
    for constant in claim.multiplier_constants:
        for p, e in factorize(constant):
            if p <= bound:  # larger factors can never be required
                available[int(np.searchsorted(primes, p))] += e
    return primes, required, available


def claim_holds(claim: DivisibilityClaim, n: int) -> tuple[bool, int | None]:
    """Fast verdict-only path: (holds, least witness prime or None)."""
    primes, required, available = _claim_valuations(claim, n)
    violations = np.flatnonzero(available < required)
    if violations.size:
        return False, int(primes[violations[0]])
    return True, None


def verify_claim(claim: DivisibilityClaim, n: int) -> Certificate:
    """Decide the claim at n prime by prime and return the full ledger.

    The enumerated primes go up to max(moduli values, divisor factorial
    arguments); beyond that bound the divisor requires nothing, so the
    verdict is complete whenever the dividend side is a genuine integer
    (a product of binomials times constants, as in every claim built
    here).  Keep factorial content with negative exponents on the
    divisor side.
    """
    primes, required, available = _claim_valuations(claim, n)
    violations = np.flatnonzero(available < required)
    holds = violations.size == 0
    witness = None if holds else int(primes[violations[0]])
    keep = np.flatnonzero(required > 0)
    entries = tuple(
        zip(
            primes[keep].tolist(),
            required[keep].tolist(),
            available[keep].tolist(),
        )
    )
    return Certificate(n=n, entries=entries, holds=holds, witness=witness)
