"""Exact partial sums of the divisor-power factorial series and their tails.

The series under study is sum over n >= 1 of sigma_k(n)/n!.  Scaling a
partial sum by (n-1)! turns the head into an integer; the windowed tail
sum(nu = n .. n+m-1) sigma_k(nu)/(nu)_(nu-n+1) then carries the whole
fractional information.  Everything here is an exact Fraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .divisors import sigma_int
from .exact import DecimalExpansion, falling_factorial, frac_dist


@dataclass(frozen=True)
class SeriesPartial:
    k: int
    n_terms: int
    value: Fraction    # sum over nu <= n_terms of sigma_k(nu)/nu!
    scaled: Fraction   # n_terms! * value, always an integer


@dataclass(frozen=True)
class TailWindow:
    k: int
    n: int             # window start
    m: int             # window length
    value: Fraction    # sum over nu = n .. n+m-1 of sigma_k(nu)/(nu)_(nu-n+1)
    distance: Fraction


def partial_sum(k: int, n_terms: int) -> SeriesPartial:
    """Exact sum over nu <= n_terms of sigma_k(nu)/nu!."""
    if k < 0 or n_terms < 1:
        raise ValueError("need k >= 0 and n_terms >= 1")
    # Horner over a common denominator n_terms!:
    # num after step nu equals sum(j <= nu) sigma_k(j) * nu!/j!.
    num = 0
    for nu in range(1, n_terms + 1):
        num = num * nu + sigma_int(nu, k)
    value = Fraction(num, factorial(n_terms))
    return SeriesPartial(k, n_terms, value, value * factorial(n_terms))


def tail_integrality(k: int, n: int) -> Fraction:
    """(n-1)! times the head sum over nu <= n-1; integral by construction.

    Each term sigma_k(nu) * (n-1)!/nu! is an integer for nu <= n-1, which is
    the mechanism that pushes all fractional content into the tail.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return factorial(n - 1) * partial_sum(k, n - 1).value


def tail_window(k: int, n: int, m: int | None = None) -> TailWindow:
    """Exact windowed tail and its distance to the nearest integer.

    The default window length is m = k (that is what the integrality argument
    consumes); any positive length is allowed.
    """
    if m is None:
        m = k
    if n < 2 or m < 1 or k < 0:
        raise ValueError("need k >= 0, n >= 2, m >= 1")
    value = Fraction(0)
    for nu in range(n, n + m):
        value += Fraction(sigma_int(nu, k), falling_factorial(nu, nu - n + 1))
    return TailWindow(k, n, m, value, frac_dist(value))


def tail_bound(k: int, n_terms: int) -> Fraction:
    """Exact upper bound for the tail sum(nu > n_terms) sigma_k(nu)/nu!.

    Uses sigma_k(nu) < nu^(k+1); beyond n_terms >= 2(k+2) the term ratio is
    below 1/2, so the tail is below twice its first term.
    """
    if n_terms < 2 * (k + 2):
        raise ValueError(f"tail bound needs n_terms >= {2 * (k + 2)}")
    first = n_terms + 1
    return 2 * Fraction(first ** (k + 1), factorial(first))


def digits(k: int, precision: int, max_rounds: int = 64) -> DecimalExpansion:
    """Decimal expansion of the full series value, certified to `precision` digits.

    The truncation index N is grown until the provable tail bound is below
    10^-(precision+2) *and* the scaled partial sum is far enough from the next
    integer that the leading `precision` digits cannot roll over.  The digits
    returned are therefore the true leading digits, and the exact error bound
    (head truncation plus tail bound) is below 10^-precision.
    """
    if precision < 1:
        raise ValueError(f"need precision >= 1, got {precision}")
    if k < 0 or k > 10:
        raise ValueError(f"need 0 <= k <= 10, got {k}")
    scale = 10 ** precision
    goal = Fraction(1, scale * 100)
    n = 2 * (k + 2)
    for _ in range(max_rounds):
        while tail_bound(k, n) > goal:
            n += 8
        head = partial_sum(k, n).value
        bound = tail_bound(k, n)
        scaled = head * scale
        whole = scaled.numerator // scaled.denominator
        if scaled - whole + bound * scale < 1:
            rendered = Fraction(whole, scale)
            err = (head - rendered) + bound
            ip, fp = divmod(whole, scale)
            return DecimalExpansion(f"{ip}.{fp:0{precision}d}", precision, err)
        n += 8        # digit boundary too close: refine and retry
        goal /= 10
    raise ArithmeticError(f"digit rendering did not stabilize for k={k}")
