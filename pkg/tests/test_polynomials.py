from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest

from sigmaseries.divisors import sigma
from sigmaseries.exact import frac_part
from sigmaseries.polynomials import (
    RatPoly,
    derive_P,
    eval_P,
    frac_period_check,
    linear,
    linear_power,
    ratio_gap,
)


def test_ratpoly_divmod_roundtrip():
    rng = random.Random(3)
    for _ in range(100):
        a = RatPoly.make([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(6)])
        b = RatPoly.make([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)])
        if b.is_zero():
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_derive_k1_is_power_with_zero_remainder():
    for k in range(1, 11):
        dec = derive_P(k, 1)
        assert dec.quotient == RatPoly.make([0] * (k - 1) + [1])
        assert dec.remainder.is_zero()


def test_derive_3_2_hand_division():
    # (x+1)^3 = (x+2)(x^2+x) + (x+1); the reduced form (x+1)^2/x leaves 1
    dec = derive_P(3, 2)
    assert dec.quotient == RatPoly.make([2, 1])
    assert dec.remainder == RatPoly.make([1, 1])
    reduced_quotient, reduced_rem = linear_power(1, 2).divmod(linear(0))
    assert reduced_quotient == dec.quotient
    assert dec.remainder == reduced_rem * linear(1)


def test_derive_3_3_hand_division():
    # (x+2)^3 over (x+2)(x+1)x; reduced: (x+2)^2 over (x+1)x leaves 3x+4
    dec = derive_P(3, 3)
    assert dec.quotient == RatPoly.make([1])
    assert dec.remainder == RatPoly.make([3, 4]) * linear(2)


def test_reconstruction_and_degree():
    for k in range(1, 9):
        for i in range(1, k + 1):
            dec = derive_P(k, i)
            assert dec.quotient * dec.divisor + dec.remainder == linear_power(i - 1, k)
            assert dec.quotient.degree == k - i
            assert dec.remainder.is_zero() or dec.remainder.degree < dec.divisor.degree
            # division by a monic integer polynomial keeps integer coefficients
            assert all(c.denominator == 1 for c in dec.quotient.coeffs)


def test_eval_hand_cases():
    assert eval_P(derive_P(3, 1), 10) == 100
    assert eval_P(derive_P(3, 3), 7) == eval_P(derive_P(3, 3), 12345)
    assert eval_P(derive_P(3, 2), 13) == 15


def test_approximation_order():
    """|exact ratio - polynomial| <= A/q with A fixed at q = 10^3."""
    for k in range(1, 6):
        for i in range(1, k + 1):
            a_const = ratio_gap(k, i, 10**3) * 10**3
            for q in (10**4, 10**5):
                assert ratio_gap(k, i, q) <= a_const / q


def test_periodicity_hand_cases():
    assert frac_period_check(2, 2, 1, 5)
    assert frac_period_check(1, 1, 3, 8, modulus=1)
    assert frac_period_check(3, 2, 1, 217)


def test_periodicity_random_pairs():
    rng = random.Random(77)
    for k in range(1, 5):
        modulus = factorial(k) ** k
        for i in range(1, k + 1):
            for _ in range(100):
                q1 = rng.randint(1, 10**6)
                q2 = q1 + modulus * rng.randint(1, 500)
                assert frac_period_check(k, i, q1, q2), (k, i, q1, q2)


def test_periodicity_reflects_weighted_fraction():
    # directly: the weighted fractional parts agree along the progression
    k, i, modulus = 3, 2, factorial(3) ** 3
    w = sigma(i, -k)
    f1 = frac_part(w * eval_P(derive_P(k, i), 5))
    f2 = frac_part(w * eval_P(derive_P(k, i), 5 + 4 * modulus))
    assert f1 == f2


def test_periodicity_rejects_violated_precondition():
    with pytest.raises(ValueError):
        frac_period_check(2, 2, 1, 2)


def test_derive_validates_arguments():
    with pytest.raises(ValueError):
        derive_P(3, 0)
    with pytest.raises(ValueError):
        derive_P(3, 4)
    with pytest.raises(ValueError):
        derive_P(11, 1)
