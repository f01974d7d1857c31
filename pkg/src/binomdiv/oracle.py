"""Independent brute-force ground truth over arbitrary-precision integers.

Deliberately naive and deliberately separate: nothing here touches the
valuation machinery it is used to validate.  Guarded to desk scale
(arguments up to 10^4) where exact big-integer arithmetic stays cheap.
"""

from __future__ import annotations

from .errors import IntegrityError, ResourceLimitError

#: Largest binomial argument the oracle will touch.
ORACLE_LIMIT = 10_000


def big_binomial(m: int, k: int) -> int:
    """Exact C(m, k) by the multiplicative recurrence.

    Each step divides exactly (the running product is itself a binomial
    coefficient), so intermediates never exceed the result.
    """
    if k < 0 or k > m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    if m > ORACLE_LIMIT:
        raise ResourceLimitError(f"binomial argument {m} exceeds oracle guard {ORACLE_LIMIT}")
    k = min(k, m - k)
    out = 1
    for i in range(1, k + 1):
        out = out * (m - k + i) // i
    return out


def _exact_quotient(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise IntegrityError(
            f"{what} is not an integer: {numerator} / {denominator} "
            f"leaves remainder {remainder}"
        )
    return quotient


def exact_conjecture_ratio(a: int, b: int, n: int) -> int:
    """R(a,b,n) = C(2an,an)C(an,bn)/C(2bn,bn), literally.

    Raises ``IntegrityError`` if the division is inexact -- that would
    falsify the integrality theorem, so it is a finding, not an input
    error.
    """
    numerator = big_binomial(2 * a * n, a * n) * big_binomial(a * n, b * n)
    return _exact_quotient(numerator, big_binomial(2 * b * n, b * n), f"R({a},{b},{n})")


def exact_s(n: int) -> int:
    """S_n = C(6n,3n)C(3n,n) / (2(2n+1)C(2n,n)), literally."""
    numerator = big_binomial(6 * n, 3 * n) * big_binomial(3 * n, n)
    denominator = 2 * (2 * n + 1) * big_binomial(2 * n, n)
    return _exact_quotient(numerator, denominator, f"S_{n}")


def exact_t(n: int) -> int:
    """t_n = C(15n,5n)C(5n-1,n-1) / ((10n+1)C(3n,n)), literally."""
    numerator = big_binomial(15 * n, 5 * n) * big_binomial(5 * n - 1, n - 1)
    denominator = (10 * n + 1) * big_binomial(3 * n, n)
    return _exact_quotient(numerator, denominator, f"t_{n}")


def divides(d: int, m: int) -> bool:
    """Whether d | m, for nonzero d."""
    if d == 0:
        raise ValueError("0 divides nothing")
    return m % d == 0
