from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest

from sigmaseries.exact import (
    DecimalExpansion,
    falling_factorial,
    frac_dist,
    frac_part,
    le_neg_power,
    neg_power_bounds,
    nth_root_floor,
    to_decimal,
)


def test_frac_dist_hand_cases():
    assert frac_dist(Fraction(7, 8)) == Fraction(1, 8)
    assert frac_dist(5) == 0
    assert frac_dist(Fraction(28, 27)) == Fraction(1, 27)


def test_frac_dist_tie_is_exactly_half():
    assert frac_dist(Fraction(1, 2)) == Fraction(1, 2)
    assert frac_dist(Fraction(-7, 2)) == Fraction(1, 2)


def test_frac_dist_symmetry_and_periodicity():
    rng = random.Random(7)
    for _ in range(500):
        x = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        m = rng.randint(-100, 100)
        d = frac_dist(x)
        assert d == frac_dist(-x) == frac_dist(x + m)
        assert 0 <= d <= Fraction(1, 2)
        assert (d == 0) == (x.denominator == 1)


def test_falling_factorial_hand_cases():
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(123, 0) == 1
    assert falling_factorial(7, 7) == 5040


def test_falling_factorial_matches_factorial():
    for n in range(31):
        assert falling_factorial(n, n) == factorial(n)


def test_falling_factorial_rejects_negative_length():
    with pytest.raises(ValueError):
        falling_factorial(5, -1)


def test_to_decimal_hand_cases():
    d = to_decimal(Fraction(19, 6), 4)
    assert d.digits == "3.1666"
    assert d.error_bound <= Fraction(1, 10**4)
    assert d.error_bound == Fraction(19, 6) - Fraction(31666, 10**4)

    d = to_decimal(Fraction(1, 2), 1)
    assert d.digits == "0.5"
    assert d.error_bound == 0

    assert to_decimal(Fraction(1, 3), 3).digits == "0.333"


def test_to_decimal_truncates_toward_zero_and_bounds_error():
    rng = random.Random(11)
    for _ in range(300):
        x = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
        digits = rng.randint(1, 12)
        d = to_decimal(x, digits)
        assert abs(x - d.value()) == d.error_bound
        assert d.error_bound < Fraction(1, 10**digits)
        assert abs(d.value()) <= abs(x)


def test_to_decimal_rejects_nonpositive_digits():
    with pytest.raises(ValueError):
        to_decimal(Fraction(1, 3), 0)


def test_decimal_expansion_roundtrip():
    d = DecimalExpansion("-2.50", 2, Fraction(0))
    assert d.value() == Fraction(-5, 2)


def test_nth_root_floor_exact_on_powers():
    rng = random.Random(13)
    for _ in range(200):
        base = rng.randint(1, 10**6)
        k = rng.randint(1, 9)
        n = base**k
        assert nth_root_floor(n, k) == base
        r = nth_root_floor(n + 1, k)
        assert r**k <= n + 1 < (r + 1) ** k


def test_le_neg_power_agrees_with_brackets():
    rng = random.Random(17)
    for _ in range(200):
        base = rng.randint(2, 10**6)
        exp = Fraction(rng.randint(1, 9), rng.randint(1, 10))
        lo, hi = neg_power_bounds(base, exp)
        assert lo < hi
        assert float(hi) - float(lo) < 1e-20
        d = Fraction(rng.randint(0, 10**6), 10**6)
        if le_neg_power(d, base, exp):
            assert d <= hi
        else:
            assert d > lo


def test_frac_part_range():
    assert frac_part(Fraction(-1, 3)) == Fraction(2, 3)
    assert frac_part(Fraction(9, 4)) == Fraction(1, 4)
