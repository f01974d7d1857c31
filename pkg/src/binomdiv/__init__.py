"""Exact p-adic verification of binomial-coefficient divisibility claims.

The package decides statements of the form

    (2bn+1)(2bn+3) C(2bn,bn)  |  3(a-b)(3a-b) C(2an,an) C(an,bn)

(and generalized factorial-ratio integrality) prime by prime via
Legendre's formula, never constructing the huge integers involved, with
an independent arbitrary-precision oracle for desk-scale cross checks.
"""

from .errors import IntegrityError, ResourceLimitError
from .valuation import (
    INFINITE,
    Lemma1Result,
    LemmaFuzzReport,
    PrimeTable,
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
)
from .ratio import (
    Certificate,
    DivisibilityClaim,
    FactorialRatio,
    IntegralityResult,
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
from .theorem import (
    ModulusSide,
    ParamTriple,
    ProofTrace,
    SweepReport,
    TraceBranch,
    check_ratio_integrality,
    check_s_congruence,
    check_t_congruence,
    conjecture_claim,
    conjecture_ratio,
    crt_split_check,
    minimal_multiplier,
    omitted_branch_trace,
    proof_trace,
    run_sweep,
    sweep_pairs,
    traces_for_modulus,
    verify_triple,
)

__version__ = "0.1.0"
