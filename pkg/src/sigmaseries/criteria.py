"""Exact fractional-part criteria.

Every evaluator returns a CriterionResult with an exact mod-1 value, an exact
distance to the nearest integer, and a rational comparator for the stated
power-law tolerance.  The satisfied flag is decided by exact integer
comparison (never by the rational approximation of the comparator), and the
stored comparator is chosen on the correct side of the irrational bound so
that satisfied == (distance <= comparator) holds verbatim.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import series
from .divisors import is_prime, sigma, sigma_int, small_primes
from .exact import frac_dist, frac_part, le_neg_power, neg_power_bounds, nth_root_floor
from .polynomials import derive_P, eval_P
from .sieve import LemmaPrime, SieveRange, pattern_modulus, primes_in

EPSILON_DEFAULT = Fraction(1, 10)

# Additive constant of the two-power criterion 9*sigma_3(n)/(4 n^2) + c.
# Pinned by the calibration run (calibrate_condition_constant): the window
# reduction realizes 1/8 + 1/27 + 2 = 35/216 mod 1, and 35/216 is the unique
# candidate whose bridge defect stays below BRIDGE_C * q^(-1/3).
CONDITION_CONSTANT = Fraction(35, 216)
CONDITION_CANDIDATES = (Fraction(19, 216), Fraction(197, 216), Fraction(35, 216))

# Absolute bridge constant: the window-minus-criterion defect is at most
# 1/q + (9/8)(sigma_{-3}(n) - 1 + 2/q) + (28/27)(sigma_{-3}(m) - 1 + 4/q),
# and the least-prime-factor cut keeps sigma_{-3}-1 below ~1.25 q^(-1/3),
# so 3 * q^(-1/3) covers every qualifying q with a >2x margin.
BRIDGE_C = 3


@dataclass(frozen=True)
class CriterionResult:
    label: str
    q_or_n: int
    value: Fraction      # mod-1 reduced exact value
    distance: Fraction   # frac_dist(value)
    comparator: Fraction # rational bracket of the power-law bound
    satisfied: bool      # distance <= bound, decided exactly


def _result(label: str, point: int, value: Fraction, base: int, exp: Fraction) -> CriterionResult:
    value = frac_part(value)
    dist = frac_dist(value)
    sat = le_neg_power(dist, base, exp)
    lo, hi = neg_power_bounds(base, exp)
    # keep the stored comparator on the side that matches the exact decision
    return CriterionResult(label, point, value, dist, hi if sat else lo, sat)


def _validate_constellation(k: int, q: int) -> None:
    m = pattern_modulus(k)
    if not is_prime(q) or q % m != 1:
        raise ValueError(f"q={q} is not a k={k} pattern prime (mod {m})")
    for i in range(1, k + 1):
        if not is_prime((q + i) // (i + 1)):
            raise ValueError(f"cofactor ({q}+{i})/{i + 1} is not prime")


def eq1_eval(k: int, q: int, epsilon: Fraction = EPSILON_DEFAULT) -> CriterionResult:
    """Distance of sum(i=1..k) sigma_{-k}(i) P_{k,i}(q) for a pattern prime q.

    Under the integrality mechanism this distance would fall below q^(-1+eps)
    for every pattern prime; the evaluator reports whether it actually does.
    Expect mostly unsatisfied results.
    """
    _validate_constellation(k, q)
    total = sum((sigma(i, -k) * eval_P(derive_P(k, i), q) for i in range(1, k + 1)), Fraction(0))
    return _result("eq1", q, total, q, 1 - epsilon)


def eq2_eval(k: int, p: int, q: int, epsilon: Fraction = EPSILON_DEFAULT) -> CriterionResult:
    """Composite-q variant: sigma_{-k}(p) replaces sigma_{-k}(1) in the i=1 term."""
    if not is_prime(p) or p <= k:
        raise ValueError(f"need a prime p > k, got p={p}")
    if q % p != 0 or not is_prime(q // p) or q // p == p:
        raise ValueError(f"q={q} is not p times a prime distinct from p={p}")
    m = pattern_modulus(k)
    if q % m != 1:
        raise ValueError(f"q={q} must be 1 mod {m}")
    for i in range(1, k + 1):
        if not is_prime((q + i) // (i + 1)):
            raise ValueError(f"cofactor ({q}+{i})/{i + 1} is not prime")
    total = sigma(p, -k) * eval_P(derive_P(k, 1), q)
    for i in range(2, k + 1):
        total += sigma(i, -k) * eval_P(derive_P(k, i), q)
    return _result("eq2", q, total, q, 1 - epsilon)


def endgame_eval(k: int, p: int, q1: int, epsilon: Fraction = EPSILON_DEFAULT) -> CriterionResult:
    """Distance of q1^(k-1)/p^k; nonzero with denominator dividing p^k.

    Whenever p^k does not divide q1^(k-1) the reduced denominator exceeds 1,
    so the distance is at least p^(-k).  p^2 | q1 is rejected because it
    collapses that lower bound.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if q1 % (p * p) == 0:
        raise ValueError(f"p^2={p * p} divides q1={q1}")
    value = Fraction(q1 ** (k - 1), p ** k)
    return _result("endgame", q1, value, q1, 1 - epsilon)


def window_criterion(q: int, epsilon: Fraction = EPSILON_DEFAULT) -> CriterionResult:
    """Exact three-term window distance at an odd prime q = 1 mod 3.

    The value is the k = 3 tail window of length 3 starting at q; the distance
    is bit-identical to series.tail_window(3, q, 3).distance.
    """
    if not is_prime(q) or q % 2 == 0 or q % 3 != 1:
        raise ValueError(f"q={q} must be an odd prime congruent to 1 mod 3")
    w = series.tail_window(3, q, 3)
    value = frac_part(w.value)
    lo, hi = neg_power_bounds(q, 1 - epsilon)
    sat = le_neg_power(w.distance, q, 1 - epsilon)
    return CriterionResult("sigma3-window", q, value, w.distance, hi if sat else lo, sat)


# canonical subcommand spelling
sigma3_window = window_criterion


@dataclass(frozen=True)
class Sigma3Constants:
    """Exact residuals of the three window-term constants at a prime q.

    * third_term_residual: sigma_3(q+2)/(q(q+1)(q+2)) - 28/27, positive,
      decaying like (28/9)/q.
    * middle_frac: fractional part of the middle-term difference
      sigma_3(q+1)/(q(q+1)) - sigma_3(q+1)/(q+1)^2; tends to 1/8.
    * mirror_residual: fractional part of the mirrored difference minus 7/8
      (equal to -(middle_frac - 1/8) for qualifying q); decays like (9/8)/q.
    * prime_term_residual: sigma_3(q)/q - q^2 - 1/q, exactly zero.
    """

    q: int
    third_term_residual: Fraction
    middle_frac: Fraction
    mirror_residual: Fraction
    prime_term_residual: Fraction


def sigma3_constants(q: int) -> Sigma3Constants:
    if not is_prime(q) or q % 2 == 0 or q % 3 != 1:
        raise ValueError(f"q={q} must be an odd prime congruent to 1 mod 3")
    n, m = (q + 1) // 2, (q + 2) // 3
    if not (is_prime(n) and n > 3 and is_prime(m) and m > 3):
        raise ValueError(f"constant checks need (q+1)/2 and (q+2)/3 prime and > 3")
    s1, s2, s3 = sigma_int(q, 3), sigma_int(q + 1, 3), sigma_int(q + 2, 3)
    third = Fraction(s3, q * (q + 1) * (q + 2)) - Fraction(28, 27)
    v = Fraction(s2, q * (q + 1)) - Fraction(s2, (q + 1) ** 2)
    middle_frac = frac_part(v)
    mirror = frac_part(-v) - Fraction(7, 8)
    prime_term = Fraction(s1, q) - q * q - Fraction(1, q)
    return Sigma3Constants(q, third, middle_frac, mirror, prime_term)


def condition_i_eval(
    n: int,
    c: Fraction = CONDITION_CONSTANT,
    shift: int = 0,
) -> CriterionResult:
    """Distance of 9*sigma_3(n)/(4 n^2) + c (+ shift/4) against n^(-1/3).

    shift in {-1, 0, +1} applies the quarter offset that replaces the full
    divisor term for odd n; shift=0 evaluates the untouched value.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if shift not in (-1, 0, 1):
        raise ValueError(f"shift must be -1, 0 or 1, got {shift}")
    value = Fraction(9 * sigma_int(n, 3), 4 * n * n) + c + Fraction(shift, 4)
    return _result("condition-i", n, value, n, Fraction(1, 3))


@dataclass(frozen=True)
class SubsetExpansion:
    """All subset terms 9 prod(p_i, i in I) / (4 prod(p_i^2, i not in I)).

    Keys are bitmasks over the ascending prime tuple; the terms sum exactly
    to 9*sigma_3(n)/(4 n^2).
    """

    n: int
    primes: tuple[int, ...]
    terms: dict[int, Fraction]

    def total(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))


def subset_expand(n: int) -> SubsetExpansion:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    from .divisors import factorize

    f = factorize(n)
    if not f.is_squarefree():
        raise ValueError(f"n={n} is not squarefree")
    ps = f.primes()
    if len(ps) > 20:
        raise ValueError(f"too many prime factors ({len(ps)})")
    terms: dict[int, Fraction] = {}
    for mask in range(1 << len(ps)):
        num, den = 9, 4
        for idx, p in enumerate(ps):
            if mask >> idx & 1:
                num *= p
            else:
                den *= p * p
        terms[mask] = Fraction(num, den)
    return SubsetExpansion(n, ps, terms)


def alpha_p1_identity(n: int) -> bool:
    """Exact check that alpha*p1 + alpha/p1^2 rebuilds the full subset sum."""
    from .equidist import alpha_from_factors

    exp = subset_expand(n)
    if not exp.primes:
        return True
    p1 = exp.primes[0]
    alpha = alpha_from_factors(list(exp.primes), len(exp.primes))
    return alpha * p1 + alpha / p1 ** 2 == exp.total()


@dataclass(frozen=True)
class EliminationReport:
    kind: str
    lo: int
    hi: int
    c: Fraction
    candidates: int
    count: int
    hits: tuple[tuple[int, Fraction], ...]   # (n, distance) of satisfying n
    cutoff: int    # largest n that could satisfy on the surviving distance alone


def _k1_cutoff(c: Fraction) -> int:
    # asymptotic surviving distance is min over the two quarter shifts
    surviving = min(frac_dist(c + Fraction(1, 4)), frac_dist(c - Fraction(1, 4)))
    if surviving == 0:
        return 1 << 62
    # distance <= n^(-1/3) possible only while n <= surviving^-3 (up to the
    # vanishing 9/(4 n^2) correction, handled by the +1 slack)
    return (surviving.denominator ** 3) // (surviving.numerator ** 3) + 1


def small_k_elimination(
    kind: str,
    rng: SieveRange,
    c: Fraction = CONDITION_CONSTANT,
) -> EliminationReport:
    """Count range members with 1 or 2 prime factors passing the criterion.

    kind="k1": primes n = p1 (the least-prime-factor cut p1 > n^(1/9) is
    automatic).  kind="k2": squarefree semiprimes n = p1*p2 with p1 > n^(1/9),
    decided exactly via p1^9 > n.  Tolerance is n^(-1/3) in both cases.
    """
    hits: list[tuple[int, Fraction]] = []
    candidates = 0
    if kind == "k1":
        for p in primes_in(rng):
            candidates += 1
            value = Fraction(9 * (1 + p ** 3), 4 * p * p) + c
            dist = frac_dist(value)
            if le_neg_power(dist, p, Fraction(1, 3)):
                hits.append((p, dist))
    elif kind == "k2":
        for p1 in small_primes(isqrt(rng.hi)):
            if p1 ** 9 <= rng.lo:
                continue   # the cut p1^9 > n fails for every n >= lo
            p2_hi = min(rng.hi // p1, (p1 ** 9 - 1) // p1)
            if p2_hi <= p1:
                continue
            for p2 in primes_in(SieveRange(p1 + 1, p2_hi)):
                n = p1 * p2
                if n < rng.lo or p1 ** 9 <= n:
                    continue
                candidates += 1
                value = Fraction(9 * (1 + p1 ** 3) * (1 + p2 ** 3), 4 * n * n) + c
                dist = frac_dist(value)
                if le_neg_power(dist, n, Fraction(1, 3)):
                    hits.append((n, dist))
        hits.sort()
    else:
        raise ValueError(f"kind must be 'k1' or 'k2', got {kind!r}")
    return EliminationReport(
        kind, rng.lo, rng.hi, c, candidates, len(hits), tuple(hits), _k1_cutoff(c)
    )


def squarefree_exclusion_bound(x: int) -> int:
    """The plain sum of floor(2x/j^2) over j >= x^(1/9); reported, not asserted.

    This is the count bound for integers in [x, 2x] divisible by the square
    of some j >= x^(1/9); it is of order x^(8/9).
    """
    j0 = nth_root_floor(x, 9)
    while j0 ** 9 < x:
        j0 += 1
    return sum(2 * x // (j * j) for j in range(j0, isqrt(2 * x) + 1))


def window_polynomial_gap(k: int, q: int) -> Fraction:
    """|tail window - polynomial surrogate| at a pattern prime q, exact."""
    _validate_constellation(k, q)
    w = series.tail_window(k, q, k)
    total = sum((sigma(i, -k) * eval_P(derive_P(k, i), q) for i in range(1, k + 1)), Fraction(0))
    return abs(w.value - total)


@dataclass(frozen=True)
class CalibrationReport:
    selected: Fraction
    bridge_constant: int
    qualifying: int
    max_scaled_defect: dict[Fraction, float]   # candidate -> max |defect| * q^(1/3)


def qualifying_window_primes(rng: SieveRange) -> list[int]:
    """Lemma primes q in the range whose half-successor (q+1)/2 is prime."""
    from .sieve import find_lemma_primes

    lemma, _ = find_lemma_primes(rng)
    return [lp.p for lp in lemma if is_prime((lp.p + 1) // 2)]


def calibrate_condition_constant(
    rng: SieveRange,
    candidates: tuple[Fraction, ...] = CONDITION_CANDIDATES,
    bridge_constant: int = BRIDGE_C,
) -> CalibrationReport:
    """Select the additive constant that realizes the window reduction.

    For each qualifying q the exact defect |window distance - criterion
    distance at (q+1)/2| is scaled by q^(1/3); the selected constant is the
    unique candidate whose scaled defect never exceeds bridge_constant.
    """
    qs = qualifying_window_primes(rng)
    max_scaled: dict[Fraction, float] = {c: 0.0 for c in candidates}
    for q in qs:
        wd = series.tail_window(3, q, 3).distance
        n = (q + 1) // 2
        base = Fraction(9 * sigma_int(n, 3), 4 * n * n)
        for c in candidates:
            defect = abs(wd - frac_dist(base + c))
            scaled = float(defect) * float(q) ** (1 / 3)
            if scaled > max_scaled[c]:
                max_scaled[c] = scaled
    winners = [c for c in candidates if max_scaled[c] <= bridge_constant]
    if len(winners) != 1:
        raise ArithmeticError(f"calibration did not isolate one constant: {max_scaled}")
    return CalibrationReport(winners[0], bridge_constant, len(qs), max_scaled)
