"""Factorization and divisor-power sums for 64-bit-range integers.

Trial division by sieved small primes, a deterministic Miller-Rabin check,
and a Brent-cycle splitter for the remaining cofactors.  sigma(n, k) is exact
for negative k as well (a Fraction, never a float).
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

_TRIAL_LIMIT = 10 ** 6
_MAX_INPUT = 1 << 64

# Witnesses proving primality for every n < 3.3e24 (covers the 64-bit domain).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_cached_limit = 0
_cached_primes: list[int] = []


def small_primes(limit: int) -> list[int]:
    """Primes <= limit from a cached simple sieve (one growing cache)."""
    global _cached_limit, _cached_primes
    if limit > _cached_limit:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
        _cached_primes = [i for i, flag in enumerate(sieve) if flag]
        _cached_limit = limit
        return _cached_primes
    return _cached_primes[: bisect_right(_cached_primes, limit)]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2**64 (valid far beyond)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite odd n, deterministic parameter sweep."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """n as an ordered product of prime powers."""

    n: int
    factors: tuple[tuple[int, int], ...]   # (prime, exponent), primes increasing

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def factorize(n: int) -> Factorization:
    """Complete prime factorization for 1 <= n < 2**64; n = 1 is the empty product."""
    if n < 1:
        raise ValueError(f"cannot factor n={n}")
    if n >= _MAX_INPUT:
        raise ValueError(f"n={n} out of the 64-bit contract")
    original, out = n, []
    # grow the trial sieve in tiers so small inputs never pay for a big sieve
    for cap in (1000, 32000, _TRIAL_LIMIT):
        for p in small_primes(min(cap, isqrt(n) + 1)):
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        if n == 1 or n < cap * cap:
            break
    if n > 1:
        if is_prime(n):
            out.append((n, 1))
        else:
            stack = [n]
            found: dict[int, int] = {}
            while stack:
                m = stack.pop()
                if is_prime(m):
                    found[m] = found.get(m, 0) + 1
                    continue
                d = _brent_rho(m)
                stack += [d, m // d]
            # merge equal primes produced by the splitter
            merged: dict[int, int] = {}
            for p, e in found.items():
                merged[p] = merged.get(p, 0) + e
            out += sorted(merged.items())
    out.sort()
    fact = Factorization(original, tuple(out))
    assert _product(fact) == original
    return fact


def _product(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= p ** e
    return out


@dataclass(frozen=True)
class DivisorSummary:
    """sigma_k(n) together with the inputs that produced it."""

    n: int
    k: int
    sigma_k: Fraction


def sigma(n: int, k: int) -> Fraction:
    """Exact sum of k-th powers of the divisors of n; k may be negative."""
    if n < 1:
        raise ValueError(f"sigma needs n >= 1, got {n}")
    if k >= 0:
        return Fraction(sigma_int(n, k))
    kk = -k
    out = Fraction(1)
    for p, e in factorize(n).factors:
        out *= Fraction(_geom(p, kk, e), p ** (kk * e))
    return out


def sigma_int(n: int, k: int) -> int:
    """sigma_k(n) as a plain integer (k >= 0 only)."""
    if n < 1 or k < 0:
        raise ValueError("sigma_int needs n >= 1 and k >= 0")
    out = 1
    for p, e in factorize(n).factors:
        out *= _geom(p, k, e)
    return out


def _geom(p: int, k: int, e: int) -> int:
    # 1 + p^k + ... + p^(k e)
    if k == 0:
        return e + 1
    return (p ** (k * (e + 1)) - 1) // (p ** k - 1)


def divisor_summary(n: int, k: int) -> DivisorSummary:
    return DivisorSummary(n, k, sigma(n, k))


def least_prime_factor(n: int) -> int:
    """Smallest prime dividing n (n >= 2)."""
    if n < 2:
        raise ValueError(f"least_prime_factor needs n >= 2, got {n}")
    for p in (2, 3, 5):
        if n % p == 0:
            return p
    limit = isqrt(n)
    for p in small_primes(max(7, min(limit, _TRIAL_LIMIT))):
        if p > limit:
            break
        if n % p == 0:
            return p
    if limit > _TRIAL_LIMIT:
        f = factorize(n)
        return f.factors[0][0]
    return n   # no prime <= sqrt(n) divides n, so n is prime


def is_squarefree(n: int) -> bool:
    """True iff no square of a prime divides n."""
    if n < 1:
        raise ValueError(f"is_squarefree needs n >= 1, got {n}")
    return factorize(n).is_squarefree()
