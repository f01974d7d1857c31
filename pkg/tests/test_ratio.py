"""Tests for factorial-ratio symbolics, valuations and claim certificates."""

import math
import random
from fractions import Fraction

import pytest

from binomdiv.oracle import big_binomial
from binomdiv.ratio import (
    Certificate,
    DivisibilityClaim,
    FactorialRatio,
    LinearForm,
    binomial_ratio,
    claim_holds,
    is_integral_at,
    ratio_level_term,
    ratio_level_terms,
    ratio_valuation,
    ratio_valuation_over_primes,
    verify_claim,
)
from binomdiv.valuation import primes_upto


def exact_ratio_value(r: FactorialRatio, n: int) -> Fraction:
    """Independent oracle: multiply the factorials out exactly."""
    value = Fraction(1)
    for form, e in r.terms:
        value *= Fraction(math.factorial(form.evaluate(n))) ** e
    return value


def form(c, d=0):
    return LinearForm(c, d)


CENTRAL = binomial_ratio(form(2), form(1))  # C(2n, n)


# ---------------------------------------------------------------------------
# forms

def test_linear_form_rendering():
    assert str(form(0, 5)) == "5"
    assert str(form(1, 0)) == "n"
    assert str(form(1, -1)) == "n-1"
    assert str(form(2, 3)) == "2n+3"
    assert str(form(-1, 2)) == "-n+2"
    assert str(form(15)) == "15n"


def test_linear_form_evaluate_and_overflow_guard():
    assert form(2, 3).evaluate(10) == 23
    with pytest.raises(OverflowError):
        form(2, 0).evaluate(2**62)


# ---------------------------------------------------------------------------
# ratio construction

def test_binomial_ratio_merges_duplicate_bottoms():
    assert CENTRAL.terms == ((form(2), 1), (form(1), -2))
    six_three = binomial_ratio(form(6), form(3))
    assert six_three.terms == ((form(6), 1), (form(3), -2))


def test_binomial_ratio_with_offsets():
    r = binomial_ratio(form(5, -1), form(1, -1))
    assert r.terms == ((form(5, -1), 1), (form(4), -1), (form(1, -1), -1))
    assert str(r) == "(5n-1)!^1 (4n)!^-1 (n-1)!^-1"


def test_from_terms_merges_and_drops_zero():
    r = FactorialRatio.from_terms([(form(3), 2), (form(3), -2), (form(1), 1)])
    assert r.terms == ((form(1), 1),)
    assert str(FactorialRatio.from_terms([])) == "1"


def test_direct_construction_validates_canonical_form():
    with pytest.raises(ValueError):
        FactorialRatio(((form(2), 0),))
    with pytest.raises(ValueError):
        FactorialRatio(((form(1), 1), (form(2), 1)))  # wrong order
    with pytest.raises(ValueError):
        FactorialRatio(((form(2), 1), (form(2), 1)))  # duplicate


def test_multiplication_and_division():
    r = CENTRAL * CENTRAL.reciprocal()
    assert r == FactorialRatio.from_terms([])
    assert (CENTRAL / CENTRAL).terms == ()
    product = binomial_ratio(form(4), form(2)) * binomial_ratio(form(2), form(1))
    assert product.terms == ((form(4), 1), (form(2), -1), (form(1), -2))


# ---------------------------------------------------------------------------
# valuations

def conjecture_style_ratio(a, b):
    # (2an)! (bn)! / ((an)! ((a-b)n)! (2bn)!)
    return FactorialRatio.from_terms(
        [
            (form(2 * a), 1),
            (form(b), 1),
            (form(a), -1),
            (form(a - b), -1),
            (form(2 * b), -1),
        ]
    )


def test_ratio_valuation_examples():
    r = conjecture_style_ratio(2, 1)
    assert ratio_valuation(r, 1, 2) == 1  # value 6
    assert ratio_valuation(r, 1, 5) == 0
    assert ratio_valuation(FactorialRatio.from_terms([]), 7, 13) == 0


def test_ratio_valuation_matches_exact_value():
    r = conjecture_style_ratio(3, 1)
    for n in (1, 2, 5):
        value = exact_ratio_value(r, n)
        assert value.denominator == 1
        for p in (2, 3, 5, 7, 11):
            count, m = 0, int(value)
            while m % p == 0:
                m //= p
                count += 1
            assert ratio_valuation(r, n, p) == count


def test_ratio_valuation_negative_argument_names_form():
    r = FactorialRatio.from_terms([(form(1, -2), 1)])
    with pytest.raises(ValueError, match=r"\(n-2\)"):
        ratio_valuation(r, 1, 2)


def test_ratio_valuation_rejects_bad_n():
    with pytest.raises(ValueError):
        ratio_valuation(CENTRAL, 0, 2)


def test_level_terms_sum_to_valuation():
    r = conjecture_style_ratio(5, 2)
    for n in (1, 3, 10):
        for p in (2, 3, 5, 7):
            terms = ratio_level_terms(r, n, p)
            assert sum(terms) == ratio_valuation(r, n, p)
            for i, term in enumerate(terms, start=1):
                assert ratio_level_term(r, n, p, i) == term


def test_valuation_additivity_over_concatenation():
    rng = random.Random(11)
    for _ in range(50):
        r1 = FactorialRatio.from_terms(
            [(form(rng.randint(1, 6)), rng.choice([-2, -1, 1, 2])) for _ in range(3)]
        )
        r2 = FactorialRatio.from_terms(
            [(form(rng.randint(1, 6)), rng.choice([-2, -1, 1, 2])) for _ in range(3)]
        )
        n = rng.randint(1, 30)
        p = rng.choice([2, 3, 5, 7, 11, 13])
        assert ratio_valuation(r1 * r2, n, p) == ratio_valuation(
            r1, n, p
        ) + ratio_valuation(r2, n, p)


def test_vectorized_valuation_matches_scalar():
    r = conjecture_style_ratio(7, 3)
    primes = primes_upto(200)
    for n in (1, 4, 9):
        batch = ratio_valuation_over_primes(r, n, primes).tolist()
        assert batch == [ratio_valuation(r, n, int(p)) for p in primes]


def test_vectorized_valuation_overflow_budget():
    huge = FactorialRatio.from_terms([(form(1), 2**40), (form(2), -(2**40))])
    with pytest.raises(OverflowError):
        ratio_valuation_over_primes(huge, 2**22, primes_upto(10))


# ---------------------------------------------------------------------------
# integrality

def test_is_integral_examples():
    assert is_integral_at(conjecture_style_ratio(3, 1), 2) == (True, None)
    chebyshev = FactorialRatio.from_terms(
        [(form(30), 1), (form(1), 1), (form(15), -1), (form(10), -1), (form(6), -1)]
    )
    assert is_integral_at(chebyshev, 1).integral
    inverse_central = FactorialRatio.from_terms([(form(1), 2), (form(2), -1)])
    assert is_integral_at(inverse_central, 1) == (False, 2)


def test_is_integral_agrees_with_exact_arithmetic():
    rng = random.Random(5)
    for _ in range(80):
        r = FactorialRatio.from_terms(
            [(form(rng.randint(1, 8)), rng.choice([-1, 1])) for _ in range(4)]
        )
        n = rng.randint(1, 12)
        result = is_integral_at(r, n)
        value = exact_ratio_value(r, n)
        assert result.integral == (value.denominator == 1)
        if not result.integral:
            assert value.denominator % result.witness == 0


def test_is_integral_empty_and_tiny_ratios():
    assert is_integral_at(FactorialRatio.from_terms([]), 3).integral
    assert is_integral_at(FactorialRatio.from_terms([(form(0, 1), 5)]), 1).integral


# ---------------------------------------------------------------------------
# claims and certificates

def conjecture_claim_21():
    return DivisibilityClaim(
        divisor_moduli=(form(2, 1), form(2, 3)),
        divisor_ratio=CENTRAL,
        multiplier_constants=(3, 1, 5),
        dividend_ratio=binomial_ratio(form(4), form(2)) * binomial_ratio(form(2), form(1)),
    )


def test_verify_claim_first_example():
    cert = verify_claim(conjecture_claim_21(), 1)
    assert cert.holds and cert.witness is None
    assert cert.verdict == "Holds"
    # divisor 3*5*C(2,1) = 30, dividend 15*C(4,2)*C(2,1) = 180, quotient 6
    assert 180 % 30 == 0
    assert cert.entries == ((2, 1, 2), (3, 1, 2), (5, 1, 1))


def test_verify_claim_example_31():
    claim = DivisibilityClaim(
        divisor_moduli=(form(2, 1), form(2, 3)),
        divisor_ratio=CENTRAL,
        multiplier_constants=(3, 2, 8),
        dividend_ratio=binomial_ratio(form(6), form(3)) * binomial_ratio(form(3), form(1)),
    )
    cert = verify_claim(claim, 1)
    assert cert.holds
    dividend = 3 * 2 * 8 * big_binomial(6, 3) * big_binomial(3, 1)
    assert dividend == 2880 and dividend % 30 == 0 and dividend // 30 == 96


def test_degenerate_claim_holds_with_zero_margins():
    claim = DivisibilityClaim(
        divisor_moduli=(),
        divisor_ratio=CENTRAL,
        multiplier_constants=(),
        dividend_ratio=CENTRAL,
    )
    cert = verify_claim(claim, 4)
    assert cert.holds
    assert cert.entries and all(req == av for _, req, av in cert.entries)
    assert cert.min_margin() == 0


def test_claim_validation():
    with pytest.raises(ValueError):
        DivisibilityClaim((), CENTRAL, (0,), CENTRAL)
    with pytest.raises(ValueError):
        DivisibilityClaim((form(1, -1),), CENTRAL, (), CENTRAL)  # 0 at n=1
    with pytest.raises(ValueError):
        DivisibilityClaim((form(-1, 5),), CENTRAL, (), CENTRAL)  # eventually < 1


def test_failing_claim_reports_least_witness():
    # 4 | C(2n, n) is false at n = 1 (C(2,1) = 2)
    claim = DivisibilityClaim(
        divisor_moduli=(form(0, 4),),
        divisor_ratio=FactorialRatio.from_terms([]),
        multiplier_constants=(),
        dividend_ratio=CENTRAL,
    )
    cert = verify_claim(claim, 1)
    assert not cert.holds
    assert cert.witness == 2
    assert cert.verdict == "Fails(p=2)"
    assert claim_holds(claim, 1) == (False, 2)


def test_certificate_entries_sorted_and_positive_required():
    cert = verify_claim(conjecture_claim_21(), 30)
    ps = [p for p, _, _ in cert.entries]
    assert ps == sorted(ps)
    assert all(req > 0 for _, req, _ in cert.entries)


def random_binomial_product(rng):
    terms = FactorialRatio.from_terms([])
    for _ in range(rng.randint(1, 2)):
        top = rng.randint(2, 7)
        bottom = rng.randint(1, top - 1)
        terms = terms * binomial_ratio(form(top), form(bottom))
    return terms


def test_certificate_soundness_against_big_integers():
    """Holds iff the exact quotient is an integer, on random claims."""
    rng = random.Random(99)
    for _ in range(120):
        claim = DivisibilityClaim(
            divisor_moduli=tuple(
                form(rng.randint(0, 3), rng.randint(1, 4)) for _ in range(rng.randint(0, 2))
            ),
            divisor_ratio=random_binomial_product(rng),
            multiplier_constants=tuple(
                rng.randint(1, 30) for _ in range(rng.randint(0, 2))
            ),
            dividend_ratio=random_binomial_product(rng),
        )
        n = rng.randint(1, 8)
        divisor = math.prod(m.evaluate(n) for m in claim.divisor_moduli) * int(
            exact_ratio_value(claim.divisor_ratio, n)
        )
        dividend = math.prod(claim.multiplier_constants) * int(
            exact_ratio_value(claim.dividend_ratio, n)
        )
        holds, witness = claim_holds(claim, n)
        cert = verify_claim(claim, n)
        assert holds == (dividend % divisor == 0)
        assert cert.holds == holds and cert.witness == witness
        assert cert.holds == all(av >= req for _, req, av in cert.entries)
        if not holds:
            quotient = Fraction(dividend, divisor)
            assert quotient.denominator % witness == 0


def test_per_level_terms_nonnegative_for_conjecture_shape():
    # a > b >= 1 makes every Legendre level addend of the core ratio >= 0
    for a in range(2, 11):
        for b in range(1, a):
            r = conjecture_style_ratio(a, b)
            for n in range(1, 51):
                for p in primes_upto(2 * a * n).tolist():
                    assert all(term >= 0 for term in ratio_level_terms(r, n, p))
