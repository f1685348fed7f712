from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt

import pytest

from sigmaseries.divisors import (
    factorize,
    is_prime,
    is_squarefree,
    least_prime_factor,
    sigma,
    sigma_int,
    small_primes,
)


def brute_sigma(n: int, k: int) -> Fraction:
    """Oracle: enumerate divisors directly."""
    return sum(
        (Fraction(d) ** k for d in range(1, n + 1) if n % d == 0), Fraction(0)
    )


def brute_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_factorize_hand_cases():
    assert factorize(15).factors == ((3, 1), (5, 1))
    assert factorize(1).factors == ()
    assert factorize(3528).factors == ((2, 3), (3, 2), (7, 2))


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_matches_trial_oracle():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(1, 10**7)
        assert list(factorize(n).factors) == brute_factor(n)


def test_factorize_large_semiprime():
    p, q = 1_000_003, 1_000_033
    assert factorize(p * q).factors == ((p, 1), (q, 1))


def test_sigma_hand_cases():
    assert sigma(2, 3) == 9
    for k in (-3, -1, 0, 2, 5):
        assert sigma(1, k) == 1
    assert sigma(15, 3) == 3528
    assert sigma(15, 3) == sigma(3, 3) * sigma(5, 3) == 28 * 126


def test_sigma_matches_divisor_enumeration():
    rng = random.Random(9)
    for _ in range(150):
        n = rng.randint(1, 3000)
        k = rng.randint(-3, 5)
        assert sigma(n, k) == brute_sigma(n, k)


def test_sigma_multiplicative_on_coprime_pairs():
    rng = random.Random(21)
    done = 0
    while done < 200:
        a, b = rng.randint(2, 10**6), rng.randint(2, 10**6)
        if gcd(a, b) != 1:
            continue
        done += 1
        for k in range(-3, 6):
            assert sigma(a * b, k) == sigma(a, k) * sigma(b, k)


def test_sigma_negative_k_identity():
    for n in range(1, 2001):
        for k in range(1, 6):
            assert sigma(n, -k) == sigma(n, k) / n**k


def test_sigma_prime_cube():
    for q in small_primes(10**5):
        assert sigma_int(q, 3) == 1 + q**3


def test_sigma_growth_with_known_exception():
    """sigma_k(n) < n^(k+1/2) on [10^3, 2*10^4] except d(1260) = 36 > sqrt(1260)."""
    violations = []
    for n in range(1000, 20001):
        for k in range(6):
            # exact comparison: sigma^2 >= n^(2k+1) marks a violation
            s = sigma_int(n, k)
            if s * s >= n ** (2 * k + 1):
                violations.append((n, k))
    assert violations == [(1260, 0)]


def test_sigma_growth_sampled_to_a_million():
    rng = random.Random(33)
    for _ in range(300):
        n = rng.randint(20001, 10**6)
        for k in range(6):
            s = sigma_int(n, k)
            assert s * s < n ** (2 * k + 1)


def test_least_prime_factor():
    assert least_prime_factor(15) == 3
    assert least_prime_factor(7) == 7
    assert least_prime_factor(91) == 7
    with pytest.raises(ValueError):
        least_prime_factor(1)


def test_least_prime_factor_matches_factorization():
    rng = random.Random(41)
    for _ in range(200):
        n = rng.randint(2, 10**9)
        assert least_prime_factor(n) == factorize(n).factors[0][0]


def test_is_squarefree():
    assert is_squarefree(15)
    assert not is_squarefree(12)
    assert is_squarefree(1)


def test_is_prime_against_trial_division():
    def trial(n):
        if n < 2:
            return False
        return all(n % d for d in range(2, isqrt(n) + 1))

    for n in range(2000):
        assert is_prime(n) == trial(n)
    rng = random.Random(55)
    for _ in range(200):
        n = rng.randint(10**6, 10**9)
        assert is_prime(n) == trial(n)
