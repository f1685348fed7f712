"""Star discrepancy, exponential sums, and derivative-test bounds.

The sequence of interest is f(n) = alpha*n + alpha/n^2 over a dyadic block
[y, 2y].  Fractional parts are computed exactly (rational alpha makes every
{f(n)} a closed-form fraction); discrepancy and the explicit Erdos-Turan
upper bound are then evaluated on those points.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import frac_part


@dataclass(frozen=True)
class SequenceSpec:
    alpha: Fraction
    y: int
    length: int

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.y < 2 or self.length < 1:
            raise ValueError(f"need y >= 2 and length >= 1")

    def phase(self, n: int) -> Fraction:
        """f(n) = alpha*n + alpha/n^2, exact."""
        a = self.alpha
        return Fraction(a.numerator * (n ** 3 + 1), a.denominator * n * n)


@dataclass(frozen=True)
class ETParams:
    H: int

    def __post_init__(self):
        if self.H < 1:
            raise ValueError(f"need H >= 1, got {self.H}")


@dataclass(frozen=True)
class VdCParams:
    """Derivative-test parameters: Q = 2^(ell+1) and C = 14 Q.

    C stays below 2^13 for ell <= 8; ell = 9 belongs to the band-exclusion
    step only and overshoots that cap.
    """

    ell: int

    def __post_init__(self):
        if not 2 <= self.ell <= 9:
            raise ValueError(f"need 2 <= ell <= 9, got {self.ell}")

    @property
    def Q(self) -> int:
        return 1 << (self.ell + 1)

    @property
    def C(self) -> int:
        return 14 * self.Q


@dataclass(frozen=True)
class DiscrepancyReport:
    spec: SequenceSpec
    true_discrepancy: float
    et_bound: float
    exp_sums: dict[int, float]      # h -> |S_h|
    vdc_bounds: dict[int, float]    # h -> two-term derivative-test bound
    vdc_note: str = "heuristic-constant"


def fractional_parts(spec: SequenceSpec) -> list[Fraction]:
    """{f(n)} for n = y .. y+length-1, exact (error budget: zero)."""
    return [frac_part(spec.phase(n)) for n in range(spec.y, spec.y + spec.length)]


def star_discrepancy(points) -> float | Fraction:
    """Exact star discrepancy of a finite point set in [0, 1).

    D*_N = max over sorted points of max(i/N - x_(i), x_(i) - (i-1)/N);
    exact Fractions in give an exact Fraction out.
    """
    pts = sorted(points)
    if not pts:
        raise ValueError("empty point set")
    n = len(pts)
    exact = all(isinstance(x, (Fraction, int)) for x in pts)
    one = Fraction(1) if exact else 1.0
    best = one * 0
    for i, x in enumerate(pts, start=1):
        up = Fraction(i, n) - x if exact else i / n - x
        down = x - (Fraction(i - 1, n) if exact else (i - 1) / n)
        best = max(best, up, down)
    return best


def exp_sum_points(points, h: int) -> float:
    """|sum over the points of e(h x)|, phases reduced exactly first."""
    if h < 1:
        raise ValueError(f"need h >= 1, got {h}")
    total = 0j
    for x in points:
        phase = frac_part(h * Fraction(x)) if isinstance(x, (Fraction, int)) else (h * x) % 1.0
        total += cmath.exp(2j * cmath.pi * float(phase))
    return abs(total)


def exp_sum(spec: SequenceSpec, h: int) -> float:
    """|sum(n = y..y+length-1) e(h f(n))| with exactly reduced phases."""
    return exp_sum_points(fractional_parts(spec), h)


def et_bound(points, params: ETParams) -> float:
    """Explicit Erdos-Turan upper bound for the star discrepancy.

    N D*_N <= N/(H+1) + 3 sum(h = 1..H) |S_h|/h, returned normalized by N.
    The constants (1, 3) make the inequality assertable rather than
    asymptotic; it must never fall below the true discrepancy.
    """
    pts = list(points)
    n = len(pts)
    if n == 0:
        raise ValueError("empty point set")
    acc = n / (params.H + 1)
    for h in range(1, params.H + 1):
        acc += 3.0 * exp_sum_points(pts, h) / h
    return acc / n


def phase_derivative(alpha: Fraction, j: int, n: int) -> Fraction:
    """j-th derivative of the curved part alpha/x^2 at x = n, exact.

    d^j/dx^j (alpha x^-2) = alpha (-1)^j (j+1)! / x^(j+2).  The linear part
    alpha*x contributes alpha at j = 1 and nothing beyond; callers that need
    the full f derivative for j >= 2 can use this value directly.
    """
    if j < 1:
        raise ValueError(f"need j >= 1, got {j}")
    sign = -1 if j % 2 else 1
    return Fraction(sign * alpha.numerator * math.factorial(j + 1), alpha.denominator * n ** (j + 2))


def vdc_bound(
    spec: SequenceSpec,
    h: int,
    params: VdCParams,
    include_alpha_factor: bool = True,
) -> float:
    """Two-term derivative-test comparator with heuristic constant 1.

    y * (h * [alpha] * |f^(ell+1)(y)|)^(1/(4Q-2)) + 1/(h * |f^(ell+1)(y)|).
    The bracketed alpha follows the displayed form of the estimate; since f
    already carries alpha, include_alpha_factor=False evaluates the reading
    without the extra factor.
    """
    if h < 1:
        raise ValueError(f"need h >= 1, got {h}")
    deriv = abs(phase_derivative(spec.alpha, params.ell + 1, spec.y))
    inner = h * deriv * (spec.alpha if include_alpha_factor else 1)
    q4 = 4 * params.Q - 2
    return spec.y * float(inner) ** (1.0 / q4) + 1.0 / (h * float(deriv))


def alpha_from_factors(primes: list[int], k: int) -> Fraction:
    """The subset sum over index sets excluding the smallest prime.

    alpha = sum over J subset of {2..k} of
            9 prod(p_i, i in J) / (4 prod(p_i^2, i in {2..k} minus J)),
    with the complement product taken inside {2..k}: this is the convention
    under which alpha*p1 + alpha/p1^2 rebuilds 9*sigma_3(n)/(4 n^2) exactly
    and p1^2 < alpha holds for three or more factors.
    """
    if len(primes) != k:
        raise ValueError(f"expected {k} primes, got {len(primes)}")
    if len(set(primes)) != len(primes):
        raise ValueError("duplicate primes")
    ps = sorted(primes)
    rest = ps[1:]
    total = Fraction(0)
    for mask in range(1 << len(rest)):
        num, den = 9, 4
        for idx, p in enumerate(rest):
            if mask >> idx & 1:
                num *= p
            else:
                den *= p * p
        total += Fraction(num, den)
    return total


def discrepancy_report(
    spec: SequenceSpec,
    et: ETParams,
    vdc: VdCParams | None = None,
    include_alpha_factor: bool = True,
) -> DiscrepancyReport:
    pts = fractional_parts(spec)
    floats = [float(x) for x in pts]
    sums = {h: exp_sum_points(pts, h) for h in range(1, et.H + 1)}
    bound = (len(pts) / (et.H + 1) + 3.0 * sum(s / h for h, s in sums.items())) / len(pts)
    vdc_map = (
        {h: vdc_bound(spec, h, vdc, include_alpha_factor) for h in sums}
        if vdc is not None
        else {}
    )
    return DiscrepancyReport(spec, float(star_discrepancy(floats)), bound, sums, vdc_map)
