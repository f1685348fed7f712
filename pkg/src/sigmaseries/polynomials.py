"""Quotient polynomials of shifted powers by falling factorials.

For 1 <= i <= k the rational function (x+i-1)^k / (x+i-1)_i splits into a
polynomial part plus a proper remainder over the falling-factorial divisor
D(x) = (x+i-1)(x+i-2)...x.  The polynomial part has integer coefficients
(division by a monic integer polynomial), degree k - i, and its weighted
fractional parts are periodic in x modulo (k!)^k.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .divisors import sigma
from .exact import frac_dist


@dataclass(frozen=True)
class RatPoly:
    """Dense rational-coefficient polynomial; coeffs[d] multiplies x^d."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(values) -> "RatPoly":
        cs = [Fraction(v) for v in values]
        while cs and cs[-1] == 0:
            cs.pop()
        return RatPoly(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1   # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly.make(
            [self.coeff(d) + other.coeff(d) for d in range(n)]
        )

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly.make(
            [self.coeff(d) - other.coeff(d) for d in range(n)]
        )

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if self.is_zero() or other.is_zero():
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly.make(out)

    def coeff(self, d: int) -> Fraction:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else Fraction(0)

    def divmod(self, divisor: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        """Exact long division: self = q * divisor + r with deg r < deg divisor."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        q = [Fraction(0)] * max(len(rem) - dd, 0)
        for d in range(len(rem) - 1, dd - 1, -1):
            c = rem[d] / lead
            if c == 0:
                continue
            q[d - dd] = c
            for j, b in enumerate(divisor.coeffs):
                rem[d - dd + j] -= c * b
        return RatPoly.make(q), RatPoly.make(rem)

    def __call__(self, x) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def to_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]


def linear(constant: int) -> RatPoly:
    """The polynomial x + constant."""
    return RatPoly.make([constant, 1])


def linear_power(constant: int, k: int) -> RatPoly:
    out = RatPoly.make([1])
    for _ in range(k):
        out = out * linear(constant)
    return out


@dataclass(frozen=True)
class QuotientDecomposition:
    """(x+i-1)^k = quotient * D + remainder, D the falling-factorial divisor."""

    k: int
    i: int
    quotient: RatPoly
    remainder: RatPoly
    divisor: RatPoly


@lru_cache(maxsize=None)
def derive_P(k: int, i: int) -> QuotientDecomposition:
    """Exact long division of (x+i-1)^k by (x+i-1)(x+i-2)...x."""
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k, got i={i}, k={k}")
    if k > 10:
        raise ValueError(f"degree cap is k <= 10, got {k}")
    numerator = linear_power(i - 1, k)
    divisor = RatPoly.make([1])
    for c in range(i):
        divisor = divisor * linear(c)
    quotient, remainder = numerator.divmod(divisor)
    assert quotient * divisor + remainder == numerator
    assert quotient.degree == k - i
    return QuotientDecomposition(k, i, quotient, remainder, divisor)


def eval_P(dec: QuotientDecomposition, q: int) -> Fraction:
    """The polynomial part evaluated exactly at q."""
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    return dec.quotient(Fraction(q))


def ratio_gap(k: int, i: int, q: int) -> Fraction:
    """|(q+i-1)^k/(q+i-1)_i - P_quotient(q)|, exact; decays like 1/q."""
    dec = derive_P(k, i)
    exact_ratio = Fraction((q + i - 1) ** k, _falling(q + i - 1, i))
    return abs(exact_ratio - eval_P(dec, q))


def _falling(x: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= x - j
    return out


def frac_period_check(k: int, i: int, q1: int, q2: int, modulus: int | None = None) -> bool:
    """True iff the weighted fractional parts at q1 and q2 agree exactly.

    The weight is sigma_{-k}(i); the congruence q1 = q2 mod (k!)^k is a
    precondition (the modulus is a parameter so tighter or looser readings
    can be probed).  A False return is a reportable counterexample, not an
    error.
    """
    if not 1 <= i <= k:
        raise ValueError(f"need 1 <= i <= k, got i={i}, k={k}")
    if modulus is None:
        modulus = factorial(k) ** k
    if (q1 - q2) % modulus:
        raise ValueError(f"q1={q1} and q2={q2} differ mod {modulus}")
    if q1 < 1 or q2 < 1:
        raise ValueError("evaluation points must be >= 1")
    dec = derive_P(k, i)
    weight = sigma(i, -k)
    diff = weight * (eval_P(dec, q1) - eval_P(dec, q2))
    return frac_dist(diff) == 0
