"""Segmented sieving and pattern finders.

Three search problems share the machinery here:

* primes q in a congruence class with every (q+i)/(i+1) prime for i <= k
  (simultaneous-primality constellations),
* the composite variant q = p*r with a fixed prime p and prime r,
* primes p for which (p+1)/2 and (p+2)/3 have no small prime factor.

All finders re-verify their hits with a trial-division primality check that
shares no code with the sieve or the Miller-Rabin path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, isqrt
from typing import Iterator

from .divisors import is_prime, least_prime_factor, small_primes
from .exact import nth_root_floor

_MAX_BOUND = (1 << 63) - 1
DEFAULT_SEGMENT = 1 << 20


@dataclass(frozen=True)
class SieveRange:
    lo: int
    hi: int
    segment_size: int = DEFAULT_SEGMENT

    def __post_init__(self):
        if not 2 <= self.lo <= self.hi <= _MAX_BOUND:
            raise ValueError(f"bad sieve range [{self.lo}, {self.hi}]")
        if self.segment_size < 2:
            raise ValueError(f"segment_size must be >= 2, got {self.segment_size}")


@dataclass(frozen=True)
class Constellation:
    """A prime q whose shifted quotients (q+i)/(i+1) are all prime."""

    k: int
    q: int
    cofactors: tuple[int, ...]   # (q+i)/(i+1) for i = 1..k
    modulus: int                 # the combined congruence modulus M(k)
    modulus_class: int           # residue of q mod modulus (1 by construction)


@dataclass(frozen=True)
class CompositeConstellation:
    """Same pattern with q = p*r composite, r prime, p a fixed prime."""

    k: int
    p: int
    r: int
    q: int
    cofactors: tuple[int, ...]
    modulus: int
    modulus_class: int


@dataclass(frozen=True)
class LemmaPrime:
    """A prime p with (p+1)/2 and (p+2)/3 free of small prime factors."""

    p: int
    lpf1: int            # least prime factor of (p+1)/2
    lpf2: int            # least prime factor of (p+2)/3
    threshold: Fraction  # rational lower approximation of the cut applied


def primes_in(rng: SieveRange) -> Iterator[int]:
    """All primes in [lo, hi], ascending, via a segmented Eratosthenes sieve."""
    base = small_primes(isqrt(rng.hi) + 1)
    lo = max(rng.lo, 2)
    for start in range(lo, rng.hi + 1, rng.segment_size):
        stop = min(start + rng.segment_size - 1, rng.hi)
        seg = bytearray([1]) * (stop - start + 1)
        for p in base:
            if p * p > stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            seg[first - start :: p] = b"\x00" * ((stop - first) // p + 1)
        for off, flag in enumerate(seg):
            if flag:
                n = start + off
                if n >= 2:
                    yield n


def lpf_table(rng: SieveRange, max_width: int = 1 << 26) -> list[int]:
    """Least prime factor of every integer in [lo, hi]; primes map to themselves."""
    width = rng.hi - rng.lo + 1
    if width > max_width:
        raise ValueError(f"range width {width} exceeds the memory budget {max_width}")
    table = [0] * width
    for p in small_primes(isqrt(rng.hi) + 1):
        first = ((rng.lo + p - 1) // p) * p
        for n in range(first, rng.hi + 1, p):
            if table[n - rng.lo] == 0:
                table[n - rng.lo] = p
    for off in range(width):
        if table[off] == 0:
            table[off] = rng.lo + off   # untouched by primes <= sqrt(hi): prime
    return table


def trial_division_prime(n: int) -> bool:
    """Primality by pure trial division; the independent re-check path."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def pattern_modulus(k: int) -> int:
    """Combined congruence modulus M(k) = lcm((k!)^k, lcm(2..k+1)).

    The congruence q = 1 mod (k!)^k alone does not make (q+i)/(i+1) integral
    when i+1 has a prime factor outside k! (for example i = k with k+1 prime),
    so the divisibility requirements q = 1 mod (i+1) are folded in.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    m = factorial(k) ** k
    for j in range(2, k + 2):
        m = m * j // gcd(m, j)
    return m


def _verify_pattern(q: int, cofactors: tuple[int, ...]) -> None:
    for value in (q, *cofactors):
        if not trial_division_prime(value):
            raise ArithmeticError(f"sieve emitted a non-prime pattern member {value}")


def find_schinzel(k: int, rng: SieveRange) -> list[Constellation]:
    """All primes q in the range with q = 1 mod M(k) and every (q+i)/(i+1) prime."""
    if not 1 <= k <= 4:
        raise ValueError(f"pattern search supports 1 <= k <= 4, got {k}")
    m = pattern_modulus(k)
    out = []
    for q in primes_in(rng):
        if q % m != 1:
            continue
        cof = tuple((q + i) // (i + 1) for i in range(1, k + 1))
        if all(is_prime(c) for c in cof):
            _verify_pattern(q, cof)
            out.append(Constellation(k, q, cof, m, q % m))
    return out


def find_composite_schinzel(k: int, p: int, rng: SieveRange) -> list[CompositeConstellation]:
    """Pattern hits among q = p*r in the range, r prime, r != p."""
    if not 1 <= k <= 4:
        raise ValueError(f"pattern search supports 1 <= k <= 4, got {k}")
    if p <= k or not is_prime(p):
        raise ValueError(f"need a prime p > k, got p={p}")
    m = pattern_modulus(k)
    out = []
    r_lo = max(2, (rng.lo + p - 1) // p)
    r_hi = rng.hi // p
    if r_lo > r_hi:
        return out
    for r in primes_in(SieveRange(r_lo, r_hi, rng.segment_size)):
        q = p * r
        if q < rng.lo or q > rng.hi or r == p or q % m != 1:
            continue
        cof = tuple((q + i) // (i + 1) for i in range(1, k + 1))
        if all(is_prime(c) for c in cof):
            for value in (r, *cof):
                if not trial_division_prime(value):
                    raise ArithmeticError(f"non-prime pattern member {value}")
            out.append(CompositeConstellation(k, p, r, q, cof, m, q % m))
    return out


def _threshold_primes(bound: int, exp: Fraction) -> list[int]:
    """Primes r with r <= bound**exp, decided exactly via r**b <= bound**a."""
    if exp <= 0:
        return []
    a, b = exp.numerator, exp.denominator
    cap = nth_root_floor(bound ** a, b) + 1
    return [r for r in small_primes(max(cap, 2)) if r ** b <= bound ** a]


def threshold_value(bound: int, exp: Fraction, bits: int = 64) -> Fraction:
    """Rational lower approximation of bound**exp (reporting only)."""
    if exp <= 0:
        return Fraction(0)
    a, b = exp.numerator, exp.denominator
    r = nth_root_floor(bound ** a << (bits * b), b)
    return Fraction(r, 1 << bits)


def find_lemma_primes(
    rng: SieveRange,
    exponent: Fraction = Fraction(1, 9),
    per_element: bool = False,
) -> tuple[list[LemmaPrime], int]:
    """Primes p in the range with both (p+1)/2 and (p+2)/3 free of small factors.

    Integrality forces p odd and p = 1 mod 3.  The cut is "least prime factor
    greater than hi**exponent", decided exactly; with per_element=True the cut
    is taken at p**exponent instead.  A non-positive exponent makes the cut
    vacuous (every candidate passes), which covers the literal negative-exponent
    reading of the condition.
    """
    if not -Fraction(1, 2) < exponent < Fraction(1, 2):
        raise ValueError(f"exponent must be in (-1/2, 1/2), got {exponent}")
    thr = _threshold_primes(rng.hi, exponent)
    thr_value = threshold_value(rng.hi, exponent) if exponent > 0 else Fraction(0)
    out = []
    for p in primes_in(rng):
        if p % 2 == 0 or p % 3 != 1:
            continue
        m1, m2 = (p + 1) // 2, (p + 2) // 3
        if per_element:
            thr = _threshold_primes(p, exponent)
            thr_value = threshold_value(p, exponent) if exponent > 0 else Fraction(0)
        if any(m1 % r == 0 for r in thr) or any(m2 % r == 0 for r in thr):
            continue
        out.append(LemmaPrime(p, least_prime_factor(m1), least_prime_factor(m2), thr_value))
    return out, len(out)
