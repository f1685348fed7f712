"""sigmaseries: exact-arithmetic experiments around divisor-power factorial series.

Exact rational partial sums and tail windows of sum sigma_k(n)/n!, quotient
polynomials of shifted powers by falling factorials, prime-pattern sieves,
fractional-part criteria with power-law comparators, and star-discrepancy /
exponential-sum bounds -- all desk-scale verifiable and deterministic.
"""

__version__ = "0.1.0"

from .exact import (
    DecimalExpansion,
    Rational,
    falling_factorial,
    frac_dist,
    frac_part,
    to_decimal,
)
from .divisors import (
    DivisorSummary,
    Factorization,
    factorize,
    is_prime,
    is_squarefree,
    least_prime_factor,
    sigma,
)
from .series import SeriesPartial, TailWindow, digits, partial_sum, tail_integrality, tail_window
from .polynomials import QuotientDecomposition, RatPoly, derive_P, eval_P, frac_period_check
from .sieve import (
    CompositeConstellation,
    Constellation,
    LemmaPrime,
    SieveRange,
    find_composite_schinzel,
    find_lemma_primes,
    find_schinzel,
    lpf_table,
    pattern_modulus,
    primes_in,
)
from .criteria import (
    CriterionResult,
    SubsetExpansion,
    condition_i_eval,
    endgame_eval,
    eq1_eval,
    eq2_eval,
    sigma3_constants,
    sigma3_window,
    small_k_elimination,
    subset_expand,
)
from .equidist import (
    DiscrepancyReport,
    ETParams,
    SequenceSpec,
    VdCParams,
    alpha_from_factors,
    et_bound,
    exp_sum,
    fractional_parts,
    star_discrepancy,
    vdc_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
