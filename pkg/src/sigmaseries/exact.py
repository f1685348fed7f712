"""Exact rational substrate.

Nearest-integer distance, falling factorials, truncating decimal rendering,
and integer-root bounds for irrational comparators.  Everything is pure and
exact; no floats enter any computation here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# The universal exact value type.  fractions.Fraction already guarantees the
# required invariants: lowest terms on construction, denominator >= 1, 0 == 0/1.
Rational = Fraction


def frac_part(x: Fraction | int) -> Fraction:
    """Fractional part {x} in [0, 1), exact."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def frac_dist(x: Fraction | int) -> Fraction:
    """Distance from x to the nearest integer, exact, in [0, 1/2].

    Ties (x half-way between two integers) return exactly 1/2.  Integers
    return exactly 0.
    """
    f = frac_part(x)
    return min(f, 1 - f)


def falling_factorial(x: int, m: int) -> int:
    """x(x-1)...(x-m+1); the empty product (m = 0) is 1."""
    if m < 0:
        raise ValueError(f"falling factorial needs m >= 0, got {m}")
    out = 1
    for j in range(m):
        out *= x - j
    return out


@dataclass(frozen=True)
class DecimalExpansion:
    """A truncated decimal rendering with a certified error bound.

    |rendered value - true value| <= error_bound <= 10^(-precision).
    """

    digits: str            # sign, integer part, '.', `precision` fractional digits
    precision: int         # count of certified fractional digits
    error_bound: Fraction  # exact bound on the rendering error

    def value(self) -> Fraction:
        """The rendered string parsed back as an exact rational."""
        sign = -1 if self.digits.startswith("-") else 1
        body = self.digits.lstrip("-")
        ip, _, fp = body.partition(".")
        return sign * (Fraction(int(ip)) + Fraction(int(fp or 0), 10 ** len(fp)))


def to_decimal(x: Fraction | int, digits: int) -> DecimalExpansion:
    """Truncating (never rounding) decimal rendering of an exact rational.

    Truncation is toward zero; the one-sided truncation error is returned
    exactly as `error_bound`.
    """
    if digits < 1:
        raise ValueError(f"need digits >= 1, got {digits}")
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    y = abs(x)
    scale = 10 ** digits
    scaled = (y.numerator * scale) // y.denominator
    ip, fp = divmod(scaled, scale)
    err = y - Fraction(scaled, scale)
    return DecimalExpansion(f"{sign}{ip}.{fp:0{digits}d}", digits, err)


def nth_root_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, in exact integer arithmetic."""
    if n < 0 or k < 1:
        raise ValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    if k == 1 or n in (0, 1):
        return n
    # Newton iteration seeded from above via the bit length.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def le_neg_power(d: Fraction, base: int, exp: Fraction) -> bool:
    """Decide d <= base**(-exp) exactly (d >= 0, base >= 1, exp > 0).

    Cross-multiplied integer comparison; no rounding anywhere.
    """
    if d < 0 or base < 1 or exp <= 0:
        raise ValueError("need d >= 0, base >= 1, exp > 0")
    a, b = exp.numerator, exp.denominator
    return d.numerator ** b * base ** a <= d.denominator ** b


def neg_power_bounds(base: int, exp: Fraction, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rational (lower, upper) brackets of base**(-exp), each within 2^-bits relative.

    lower < base**(-exp) <= upper.
    """
    if base < 1 or exp <= 0:
        raise ValueError("need base >= 1, exp > 0")
    a, b = exp.numerator, exp.denominator
    r = nth_root_floor(base ** a << (bits * b), b)   # floor(2^bits * base^(a/b))
    return Fraction(1 << bits, r + 1), Fraction(1 << bits, r)
