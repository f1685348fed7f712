from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest

from sigmaseries.divisors import sigma_int
from sigmaseries.series import (
    digits,
    partial_sum,
    tail_bound,
    tail_integrality,
    tail_window,
)


def test_partial_sum_hand_cases():
    assert partial_sum(1, 3).value == Fraction(19, 6)
    assert partial_sum(0, 1).value == 1
    assert partial_sum(3, 2).value == Fraction(11, 2)


def test_partial_sum_matches_term_by_term_oracle():
    rng = random.Random(3)
    for _ in range(40):
        k = rng.randint(0, 5)
        n = rng.randint(1, 40)
        expect = sum(
            (Fraction(sigma_int(nu, k), factorial(nu)) for nu in range(1, n + 1)),
            Fraction(0),
        )
        got = partial_sum(k, n)
        assert got.value == expect
        assert got.scaled == expect * factorial(n)
        assert got.scaled.denominator == 1


def test_tail_integrality_hand_cases():
    assert tail_integrality(1, 4) == 19
    for k in range(6):
        assert tail_integrality(k, 2) == 1
    assert tail_integrality(0, 5) == 59


def test_tail_integrality_always_integral():
    for k in range(6):
        for n in range(2, 61):
            assert tail_integrality(k, n).denominator == 1


def test_tail_window_hand_cases():
    w = tail_window(1, 3, 2)
    assert w.value == Fraction(23, 12)
    assert w.distance == Fraction(1, 12)
    # a single term is sigma_k(n)/n
    for k in range(4):
        for n in (2, 5, 9):
            assert tail_window(k, n, 1).value == Fraction(sigma_int(n, k), n)


def test_tail_window_default_length_is_k():
    assert tail_window(3, 13).m == 3
    assert tail_window(3, 13).value == tail_window(3, 13, 3).value


def test_telescoping_identity():
    """(n-1)! * partial(N) - head integer = the window terms from n to N, exactly."""
    rng = random.Random(17)
    for _ in range(25):
        k = rng.randint(0, 4)
        n = rng.randint(2, 20)
        big = rng.randint(n, 30)
        lhs = factorial(n - 1) * partial_sum(k, big).value - tail_integrality(k, n)
        rhs = sum(
            (
                Fraction(sigma_int(nu, k) * factorial(n - 1), factorial(nu))
                for nu in range(n, big + 1)
            ),
            Fraction(0),
        )
        assert lhs == rhs
        window = tail_window(k, n, big - n + 1)
        assert window.value == rhs


def test_term_bound_beyond_window():
    """Term at nu = n+m is below (n+m)^(k+1)/(n+m)_(m+1), which is below 1/n.

    With m = k+2 this holds from n = 5 on; the tiny-n violations of the
    crude bound are pinned exactly.
    """
    from sigmaseries.exact import falling_factorial

    rng = random.Random(29)
    checked = 0
    for n in [5, 7, 11, 50, 123] + [rng.randint(5, 10**4) for _ in range(40)]:
        for k in range(6):
            m = k + 2
            nu = n + m
            term = Fraction(sigma_int(nu, k), falling_factorial(nu, nu - n + 1))
            crude = Fraction(nu ** (k + 1), falling_factorial(nu, m + 1))
            assert term <= crude < Fraction(1, n)
            checked += 1
    assert checked > 200


def test_term_bound_small_n_exceptions_are_exact():
    from sigmaseries.exact import falling_factorial

    bad = []
    for n in (2, 3, 4):
        for k in range(6):
            m = k + 2
            nu = n + m
            crude = Fraction(nu ** (k + 1), falling_factorial(nu, m + 1))
            if crude >= Fraction(1, n):
                bad.append((k, n))
    assert bad == [(4, 2), (5, 2), (5, 3), (5, 4)]


def test_tail_bound_dominates_brute_tail():
    for k in range(4):
        n = 2 * (k + 2) + 3
        brute = sum(
            (Fraction(sigma_int(nu, k), factorial(nu)) for nu in range(n + 1, n + 60)),
            Fraction(0),
        )
        assert brute < tail_bound(k, n)


def test_digits_prefix_stability():
    short = digits(1, 5)
    long = digits(1, 50)
    assert long.digits.startswith(short.digits)
    assert short.error_bound <= Fraction(1, 10**5)
    assert long.error_bound <= Fraction(1, 10**50)


def test_digits_matches_float_oracle():
    value = digits(0, 10)
    brute = sum(sigma_int(n, 0) / factorial(n) for n in range(1, 200))
    assert abs(float(value.value()) - brute) < 1e-8


def test_digits_chosen_truncation_bound():
    # the certified bound is part of the result: error <= 10^-precision
    for k in (0, 2, 4):
        d = digits(k, 12)
        assert d.error_bound <= Fraction(1, 10**12)
        assert d.precision == 12


def test_digits_rejects_bad_precision():
    with pytest.raises(ValueError):
        digits(1, 0)
