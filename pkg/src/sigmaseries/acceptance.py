"""The acceptance suite: one callable per criterion, exact tolerances pinned.

Each criterion returns a CheckResult with the measured statistic, the
tolerance it was held to, and the witnesses of any failure.  run_all drives
the full battery (or the quick subset), prints one pass/fail line per
criterion, and writes a deterministic JSON report.

tolerance_scale < 1 hardens every calibrated tolerance (upper bounds shrink,
lower bounds grow); it exists as a negative control and must flip at least
one empirically-calibrated criterion at 1/2.
"""
from __future__ import annotations

import filecmp
import random
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, isqrt, log
from pathlib import Path

from . import criteria, divisors, equidist, polynomials, series, sieve
from .exact import falling_factorial, frac_dist, frac_part, le_neg_power
from .report import frac_str, jsonable, write_csv, write_json

DEFAULT_SEED = 20260810


@dataclass
class AcceptanceContext:
    seed: int = DEFAULT_SEED
    tolerance_scale: Fraction = Fraction(1)
    output_dir: Path | None = None
    quick: bool = False

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")


@dataclass
class CheckResult:
    cid: int
    name: str
    passed: bool
    statistic: str
    tolerance: str
    detail: str
    witnesses: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.cid:02d} {self.name}: {self.detail}"


def c01_exactness_core(ctx: AcceptanceContext) -> CheckResult:
    """10^4 randomized exact identities on distances and falling factorials."""
    rng = ctx.rng("c01")
    bad = []
    for trial in range(10_000):
        x = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        m = rng.randint(-50, 50)
        d = frac_dist(x)
        if not (d == frac_dist(-x) == frac_dist(x + m)):
            bad.append(("symmetry", str(x)))
        if d > Fraction(1, 2):
            bad.append(("range", str(x)))
        if (d == 0) != (x.denominator == 1):
            bad.append(("integer-iff-zero", str(x)))
        if trial < 31 and falling_factorial(trial, trial) != factorial(trial):
            bad.append(("falling-factorial", trial))
        a = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
        b = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
        if (a + b) - b != a:
            bad.append(("exact-add", str((a, b))))
    return CheckResult(
        1, "exactness-core", not bad, f"{len(bad)} failures", "0 failures",
        f"10^4 randomized identities, {len(bad)} failures", bad[:10],
    )


def c02_divisor_laws(ctx: AcceptanceContext) -> CheckResult:
    """Multiplicativity, the sign-flip identity, and the prime cube formula."""
    rng = ctx.rng("c02")
    bad = []
    from math import gcd

    pairs = 0
    while pairs < 400:
        a, b = rng.randint(2, 10**6), rng.randint(2, 10**6)
        if gcd(a, b) != 1:
            continue
        pairs += 1
        for k in range(-3, 6):
            if divisors.sigma(a * b, k) != divisors.sigma(a, k) * divisors.sigma(b, k):
                bad.append(("multiplicativity", a, b, k))
    for _ in range(2000):
        n = rng.randint(1, 10**6)
        for k in range(1, 6):
            if divisors.sigma(n, -k) != divisors.sigma(n, k) / n**k:
                bad.append(("sign-flip", n, k))
    primes = [p for p in divisors.small_primes(10**6) if p > 2]
    for q in rng.sample(primes, 2000):
        if divisors.sigma(q, 3) != 1 + q**3:
            bad.append(("prime-cube", q))
    return CheckResult(
        2, "divisor-laws", not bad, f"{len(bad)} failures", "0 failures",
        f"400 coprime pairs x 9 exponents, 2000 sign-flips, 2000 primes; {len(bad)} failures",
        bad[:10],
    )


def c03_tail_integrality(ctx: AcceptanceContext) -> CheckResult:
    """(n-1)! times the head sum is an integer for every k <= 5, n <= 60."""
    bad = [
        (k, n)
        for k in range(6)
        for n in range(2, 61)
        if series.tail_integrality(k, n).denominator != 1
    ]
    return CheckResult(
        3, "tail-integrality", not bad, f"{len(bad)} non-integers", "all integral",
        f"k <= 5, n <= 60 exhaustive; {len(bad)} non-integral values", bad,
    )


def c04_quotient_polynomials(ctx: AcceptanceContext) -> CheckResult:
    """Reconstruction identity, the x^(k-1) law, and the 1/q approximation order."""
    bad = []
    for k in range(1, 9):
        for i in range(1, k + 1):
            dec = polynomials.derive_P(k, i)
            if dec.quotient * dec.divisor + dec.remainder != polynomials.linear_power(i - 1, k):
                bad.append(("reconstruction", k, i))
            if dec.quotient.degree != k - i:
                bad.append(("degree", k, i))
    for k in range(1, 11):
        expect = polynomials.RatPoly.make([0] * (k - 1) + [1])
        if polynomials.derive_P(k, 1).quotient != expect:
            bad.append(("monomial-law", k))
    # approximation order: A fixed at q = 10^3, asserted at 10^4 and 10^5
    scale = Fraction(ctx.tolerance_scale)
    for k in range(1, 6):
        for i in range(1, k + 1):
            a_const = polynomials.ratio_gap(k, i, 10**3) * 10**3 * scale
            for q in (10**4, 10**5):
                if polynomials.ratio_gap(k, i, q) > a_const / q:
                    bad.append(("approximation-order", k, i, q))
    return CheckResult(
        4, "quotient-polynomials", not bad, f"{len(bad)} failures", "0 failures",
        f"reconstruction k<=8, monomial law k<=10, 1/q order k<=5; {len(bad)} failures",
        bad[:10],
    )


def c05_periodicity(ctx: AcceptanceContext) -> CheckResult:
    """Fractional parts repeat exactly along the (k!)^k progression."""
    rng = ctx.rng("c05")
    bad = []
    for k in range(1, 5):
        modulus = factorial(k) ** k
        for i in range(1, k + 1):
            for _ in range(100):
                q1 = rng.randint(1, 10**6)
                q2 = q1 + modulus * rng.randint(1, 1000)
                if not polynomials.frac_period_check(k, i, q1, q2):
                    bad.append((k, i, q1, q2))
    return CheckResult(
        5, "fractional-periodicity", not bad, f"{len(bad)} counterexamples",
        "exact equality", f"100 random pairs per (k, i), k <= 4; {len(bad)} counterexamples",
        bad,
    )


def c06_constellations(ctx: AcceptanceContext) -> CheckResult:
    """Every emitted pattern re-verifies; the k=2 scan over [2, 10^4] hits 13."""
    bad = []
    found_k2 = sieve.find_schinzel(2, sieve.SieveRange(2, 10**4))
    if 13 not in [c.q for c in found_k2]:
        bad.append(("missing-13",))
    oracle = [
        q
        for q in range(13, 10**4 + 1, 12)
        if sieve.trial_division_prime(q)
        and sieve.trial_division_prime((q + 1) // 2)
        and sieve.trial_division_prime((q + 2) // 3)
    ]
    if [c.q for c in found_k2] != oracle:
        bad.append(("k2-oracle-mismatch", oracle[:5]))
    batches = [
        sieve.find_schinzel(1, sieve.SieveRange(2, 10**5)),
        found_k2,
        sieve.find_schinzel(3, sieve.SieveRange(2, 10**5)),
        sieve.find_composite_schinzel(1, 3, sieve.SieveRange(2, 10**4)),
        sieve.find_composite_schinzel(2, 5, sieve.SieveRange(2, 10**5)),
    ]
    checked = 0
    for batch in batches:
        for member in batch:
            checked += 1
            values = (member.q, *member.cofactors)
            if not all(sieve.trial_division_prime(v) for v in values):
                bad.append(("reverify", member.q))
            if member.q % member.modulus != 1:
                bad.append(("congruence", member.q))
    return CheckResult(
        6, "constellations", not bad, f"{len(bad)} failures", "0 failures",
        f"{checked} pattern members re-verified; 13 present in the k=2 scan", bad[:10],
    )


def c07_lemma_density(ctx: AcceptanceContext) -> CheckResult:
    """Count of cut-surviving primes stays comparable to x/ln^3 x.

    The band is calibrated at x = 10^4: [ratio/2, 2*ratio].  The count at
    10^6 must also clear the lower edge in absolute terms.
    """
    scale = Fraction(ctx.tolerance_scale)
    ratios = {}
    counts = {}
    for x in (10**4, 10**5, 10**6):
        _, count = sieve.find_lemma_primes(sieve.SieveRange(2, x))
        counts[x] = count
        ratios[x] = count * log(x) ** 3 / x
    c1 = ratios[10**4] / 2 / float(scale)     # hardening raises the floor
    c2 = ratios[10**4] * 2 * float(scale)     # and lowers the ceiling
    bad = []
    for x in (10**5, 10**6):
        if not c1 <= ratios[x] <= c2:
            bad.append((x, ratios[x]))
    if counts[10**6] < c1 * 10**6 / log(10**6) ** 3:
        bad.append(("absolute-floor", counts[10**6]))
    return CheckResult(
        7, "lemma-density", not bad,
        f"ratios {ratios[10**4]:.2f}/{ratios[10**5]:.2f}/{ratios[10**6]:.2f}",
        f"band [{c1:.2f}, {c2:.2f}]",
        f"counts {counts[10**4]}/{counts[10**5]}/{counts[10**6]} at 1e4/1e5/1e6", bad,
    )


def _first_qualifying(limit: int, want: int) -> list[int]:
    """First `want` primes q with (q+1)/2 and (q+2)/3 prime and > 3."""
    out = []
    for q in sieve.primes_in(sieve.SieveRange(13, limit)):
        if q % 2 == 0 or q % 3 != 1:
            continue
        n, m = (q + 1) // 2, (q + 2) // 3
        if n > 3 and m > 3 and divisors.is_prime(n) and divisors.is_prime(m):
            out.append(q)
            if len(out) == want:
                break
    return out


def c08_sigma3_constants(ctx: AcceptanceContext) -> CheckResult:
    """Prime-term fractional part, and decay of the 28/27 and 7/8 residuals."""
    scale = float(ctx.tolerance_scale)
    rng = ctx.rng("c08")
    bad = []
    primes = divisors.small_primes(10**6)
    for q in rng.sample(primes, 2000):
        if frac_part(Fraction(divisors.sigma_int(q, 3), q)) != Fraction(1, q):
            bad.append(("prime-frac", q))
    qs = _first_qualifying(10**6, 50)
    if len(qs) < 50:
        bad.append(("too-few-qualifying", len(qs)))
    consts = [criteria.sigma3_constants(q) for q in qs]
    q0 = qs[0]
    c_third = float(abs(consts[0].third_term_residual)) * q0 ** (1 / 3)
    c_mirror = float(abs(consts[0].mirror_residual)) * q0 ** (1 / 3)
    for rec in consts:
        if float(abs(rec.third_term_residual)) * rec.q ** (1 / 3) > c_third * scale:
            bad.append(("third-term", rec.q))
        if float(abs(rec.mirror_residual)) * rec.q ** (1 / 3) > c_mirror * scale:
            bad.append(("mirror", rec.q))
        if rec.prime_term_residual != 0:
            bad.append(("prime-term-residual", rec.q))
    return CheckResult(
        8, "sigma3-constants", not bad,
        f"C_third={c_third:.3f}, C_mirror={c_mirror:.3f}",
        f"scaled by {scale}",
        f"2000 prime fractional parts exact; residual decay over the first {len(qs)} "
        f"qualifying q (calibrated at q0={q0})", bad[:10],
    )


def c09_subset_expansion(ctx: AcceptanceContext) -> CheckResult:
    """Exact subset-sum identity on 10^3 random squarefree n <= 10^9."""
    rng = ctx.rng("c09")
    bad = []
    exp15 = criteria.subset_expand(15)
    if exp15.total() != Fraction(9, 4) * Fraction(3528, 225):
        bad.append(("hand-case-15", str(exp15.total())))
    done = 0
    while done < 1000:
        n = rng.randint(2, 10**9)
        f = divisors.factorize(n)
        if not f.is_squarefree():
            continue
        done += 1
        exp = criteria.subset_expand(n)
        if exp.total() != Fraction(9 * divisors.sigma_int(n, 3), 4 * n * n):
            bad.append(("sum-identity", n))
        if len(exp.terms) != 1 << len(exp.primes):
            bad.append(("term-count", n))
    return CheckResult(
        9, "subset-expansion", not bad, f"{len(bad)} failures", "exact equality",
        f"10^3 random squarefree n <= 10^9 plus the n=15 hand case; {len(bad)} failures",
        bad[:10],
    )


def c10_endgame_bound(ctx: AcceptanceContext) -> CheckResult:
    """Nonzero distances of q1^(k-1)/p^k never fall below p^-k."""
    rng = ctx.rng("c10")
    primes = [p for p in divisors.small_primes(500) if p >= 3]
    bad = []
    for _ in range(1000):
        p = rng.choice(primes)
        k = rng.randint(2, 5)
        while True:
            q1 = rng.randint(p * p + 1, 10**9)
            if q1 % (p * p):
                break
        res = criteria.endgame_eval(k, p, q1)
        if res.distance == 0:
            bad.append(("unexpected-zero", p, k, q1))
        elif res.distance < Fraction(1, p**k):
            bad.append(("below-floor", p, k, q1))
    return CheckResult(
        10, "endgame-bound", not bad, f"{len(bad)} failures", ">= p^-k when nonzero",
        f"10^3 random (p, q1) pairs, k in [2,5]; {len(bad)} failures", bad[:10],
    )


def c11_condition_calibration(ctx: AcceptanceContext) -> CheckResult:
    """The window bridge isolates one additive constant; it must be the pinned one."""
    scale = float(ctx.tolerance_scale)
    rng = sieve.SieveRange(10**3, 10**6)
    try:
        cal = criteria.calibrate_condition_constant(rng)
    except ArithmeticError as exc:
        return CheckResult(
            11, "condition-i-calibration", False, "no unique constant", "one winner",
            str(exc),
        )
    winner_max = cal.max_scaled_defect[cal.selected]
    others = {frac_str(c): round(v, 3) for c, v in cal.max_scaled_defect.items()}
    ok = (
        cal.selected == criteria.CONDITION_CONSTANT
        and winner_max <= criteria.BRIDGE_C * scale
        and all(
            v > criteria.BRIDGE_C
            for c, v in cal.max_scaled_defect.items()
            if c != cal.selected
        )
    )
    return CheckResult(
        11, "condition-i-calibration", ok,
        f"max defect*q^(1/3) = {winner_max:.3f}",
        f"<= {criteria.BRIDGE_C * scale}",
        f"selected c* = {frac_str(cal.selected)} over {cal.qualifying} qualifying q; "
        f"scaled defects {others}",
        [],
    )


def _fd_derivative(alpha: Fraction, j: int, n: int, h: Fraction) -> Fraction:
    """Central j-th finite difference of alpha/x^2 at x=n, exact rationals."""
    total = Fraction(0)
    for i in range(j + 1):
        x = Fraction(n) + (Fraction(j, 2) - i) * h
        total += (-1) ** i * comb(j, i) * Fraction(alpha.numerator, alpha.denominator) / x ** 2
    return total / h**j


def c12_equidistribution(ctx: AcceptanceContext) -> CheckResult:
    """Upper-bound law, oracle-exact discrepancy, and derivative formula."""
    rng = ctx.rng("c12")
    bad = []
    # explicit ET bound dominates the true discrepancy: random sequences
    params = equidist.ETParams(H=50)
    for trial in range(100):
        pts = [rng.random() for _ in range(1000)]
        if equidist.et_bound(pts, params) < equidist.star_discrepancy(pts):
            bad.append(("et-law-random", trial))
    # ... and generated curved sequences
    for trial in range(20):
        spec = equidist.SequenceSpec(
            alpha=Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6)),
            y=rng.randint(10, 500),
            length=500,
        )
        pts = equidist.fractional_parts(spec)
        if equidist.et_bound(pts, params) < float(equidist.star_discrepancy([float(x) for x in pts])):
            bad.append(("et-law-curved", str(spec.alpha)))
    # exact agreement with the quadratic oracle
    for trial in range(20):
        n = rng.randint(1, 200)
        pts = [Fraction(rng.randint(0, 2047), 2048) for _ in range(n)]
        fast = equidist.star_discrepancy(pts)
        slow = _oracle_discrepancy(pts)
        if fast != slow:
            bad.append(("oracle-mismatch", trial, n))
    # derivative formula against exact finite differences
    h = Fraction(1, 1024)
    for j in range(1, 11):
        alpha = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
        exact = equidist.phase_derivative(alpha, j, 1000)
        fd = _fd_derivative(alpha, j, 1000, h)
        if abs(fd - exact) > abs(exact) * Fraction(1, 10**6):
            bad.append(("derivative", j))
    return CheckResult(
        12, "equidistribution", not bad, f"{len(bad)} failures", "0 violations",
        "ET law on 100 random + 20 curved sequences; oracle-exact discrepancy on "
        f"20 sets (N <= 200); derivative formula to 1e-6 for j <= 10; {len(bad)} failures",
        bad[:10],
    )


def _oracle_discrepancy(points: list[Fraction]) -> Fraction:
    """O(N^2) star discrepancy: test every subinterval endpoint directly."""
    n = len(points)
    best = Fraction(0)
    for t in points:
        below = sum(1 for x in points if x < t)
        at_or_below = sum(1 for x in points if x <= t)
        best = max(best, abs(Fraction(below, n) - t), abs(Fraction(at_or_below, n) - t))
    return best


def c13_k1_elimination(ctx: AcceptanceContext) -> CheckResult:
    """Zero primes in [10^3, 10^6] may pass the two-power criterion.

    Held exactly as stated.  With the calibrated constant 35/216 the surviving
    distance is 19/216 - 9/(4 p^2), so primes p = 3 mod 4 up to ~1470 still
    clear the p^(-1/3) tolerance; the scan reports them as witnesses and the
    criterion records an honest failure (see the k1 cutoff in the report).
    """
    rep = criteria.small_k_elimination(
        "k1", sieve.SieveRange(10**3, 10**6), criteria.CONDITION_CONSTANT
    )
    witnesses = [(n, frac_str(d)) for n, d in rep.hits]
    return CheckResult(
        13, "k1-elimination", rep.count == 0, f"{rep.count} satisfying primes",
        "0 satisfying primes",
        f"{rep.candidates} primes scanned with c*={frac_str(rep.c)}; "
        f"theoretical cutoff n <= {rep.cutoff}; {rep.count} still satisfy",
        witnesses,
    )


def c14_determinism(ctx: AcceptanceContext) -> CheckResult:
    """Two quick runs with one seed must write byte-identical reports."""
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [Path(tmp) / "a", Path(tmp) / "b"]
        for d in dirs:
            sub = AcceptanceContext(
                seed=ctx.seed, tolerance_scale=ctx.tolerance_scale,
                output_dir=d, quick=True,
            )
            run_all(sub, echo=False)
        names = sorted(p.name for p in dirs[0].iterdir())
        names_b = sorted(p.name for p in dirs[1].iterdir())
        mismatched = []
        if names != names_b:
            mismatched.append(("file-sets", names, names_b))
        else:
            for name in names:
                if not filecmp.cmp(dirs[0] / name, dirs[1] / name, shallow=False):
                    mismatched.append(name)
    return CheckResult(
        14, "determinism", not mismatched, f"{len(mismatched)} mismatches",
        "byte-identical", f"quick suite run twice with seed {ctx.seed}; "
        f"{len(mismatched)} differing files", mismatched,
    )


# (cid, function, in_quick_subset)
CRITERIA = [
    (1, c01_exactness_core, True),
    (2, c02_divisor_laws, False),
    (3, c03_tail_integrality, True),
    (4, c04_quotient_polynomials, True),
    (5, c05_periodicity, True),
    (6, c06_constellations, True),
    (7, c07_lemma_density, False),
    (8, c08_sigma3_constants, False),
    (9, c09_subset_expansion, True),
    (10, c10_endgame_bound, True),
    (11, c11_condition_calibration, False),
    (12, c12_equidistribution, False),
    (13, c13_k1_elimination, False),
    (14, c14_determinism, False),
]


def run_all(ctx: AcceptanceContext, echo: bool = True) -> list[CheckResult]:
    results = []
    for cid, func, in_quick in CRITERIA:
        if ctx.quick and not in_quick:
            continue
        res = func(ctx)
        results.append(res)
        if echo:
            print(res.line())
    if ctx.output_dir is not None:
        config = {
            "seed": ctx.seed,
            "tolerance_scale": frac_str(Fraction(ctx.tolerance_scale)),
            "quick": ctx.quick,
        }
        write_json(
            Path(ctx.output_dir) / "acceptance_report.json",
            {"results": jsonable(results)},
            config,
        )
        thirteen = [r for r in results if r.cid == 13]
        if thirteen:
            write_csv(
                Path(ctx.output_dir) / "k1_exceptions.csv",
                ["n", "distance"],
                thirteen[0].witnesses,
                config,
            )
    return results
