"""Batch experiment runner.

Every module is reachable as a subcommand; reports land in --output-dir as
CSV/JSON with the producing config and version embedded.  Exit codes: 0 on
success, 1 on configuration errors, 2 when an invariant is violated mid-run
(the violation is serialized before exiting).  Progress chatter goes to
stderr; data files stay machine-clean.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from math import log
from multiprocessing import Pool
from pathlib import Path

from . import __version__, acceptance, criteria, equidist, polynomials, series, sieve
from .divisors import small_primes
from .report import CRITERION_HEADER, criterion_rows, frac_str, parse_fraction, write_csv, write_json


class ConfigError(Exception):
    pass


class InvariantViolation(Exception):
    def __init__(self, payload: dict):
        super().__init__(str(payload))
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 by default; config errors must exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


@dataclass
class ExperimentConfig:
    command: str
    lo: int = 2
    hi: int = 10**4
    segment_size: int = sieve.DEFAULT_SEGMENT
    k: int = 1
    epsilon: Fraction = criteria.EPSILON_DEFAULT
    precision: int = 30
    output_dir: Path = Path("reports")
    workers: int = 1
    seed: int = acceptance.DEFAULT_SEED

    def sieve_range(self) -> sieve.SieveRange:
        return sieve.SieveRange(self.lo, self.hi, self.segment_size)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "lo": self.lo,
            "hi": self.hi,
            "segment_size": self.segment_size,
            "k": self.k,
            "epsilon": frac_str(self.epsilon),
            "precision": self.precision,
            "workers": self.workers,
            "seed": self.seed,
        }


def _pmap(func, items, workers: int):
    """Order-preserving map, optionally across a process pool."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with Pool(workers) as pool:
        return pool.map(func, items, chunksize=max(1, len(items) // (workers * 8)))


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lo", type=int, default=2)
    p.add_argument("--hi", type=int, default=10**4)
    p.add_argument("--segment-size", type=int, default=sieve.DEFAULT_SEGMENT)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--epsilon", type=parse_fraction, default=criteria.EPSILON_DEFAULT)
    p.add_argument("--precision", type=int, default=30)
    p.add_argument("--output-dir", type=Path, default=Path("reports"))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--config", type=Path, default=None, help="JSON file overriding flags")


def build_parser() -> _Parser:
    parser = _Parser(prog="sigmaseries", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="partial sums and certified digits")
    _add_common(p)
    p.add_argument("--terms", type=int, default=40)

    p = sub.add_parser("sieve", help="prime and pattern sieves")
    p.add_argument("mode", choices=["primes", "lemma", "schinzel", "composite"])
    _add_common(p)
    p.add_argument("--exponent", type=parse_fraction, default=Fraction(1, 9))
    p.add_argument("--per-element", action="store_true")
    p.add_argument("--p", type=int, default=3, help="fixed prime for composite patterns")

    p = sub.add_parser("poly", help="quotient polynomial derivations")
    p.add_argument("mode", choices=["derive"])
    _add_common(p)
    p.add_argument("--i", type=int, default=None)

    p = sub.add_parser("criteria", help="fractional-part criteria")
    p.add_argument(
        "mode",
        choices=["eq1", "eq2", "endgame", "sigma3", "condition-i", "subset", "small-k"],
    )
    _add_common(p)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--q1", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--c", type=parse_fraction, default=criteria.CONDITION_CONSTANT)
    p.add_argument("--kind", choices=["k1", "k2"], default="k1")
    p.add_argument("--shift", type=int, choices=[-1, 0, 1], default=0)

    p = sub.add_parser("equidist", help="discrepancy and exponential-sum reports")
    p.add_argument("mode", choices=["run", "sweep"])
    _add_common(p)
    p.add_argument("--alpha", type=parse_fraction, default=Fraction(665857, 470832))
    p.add_argument("--y", type=int, default=100)
    p.add_argument("--length", type=int, default=100)
    p.add_argument("--h-max", type=int, default=50)
    p.add_argument("--h-cap", type=int, default=2000,
                   help="cap for the ln^7(x)-derived harmonic cutoff in sweeps")
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--x", type=int, default=10**6, help="global range bound of the sweep")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--no-alpha-factor", action="store_true")

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    _add_common(p)
    p.add_argument("--quick", action="store_true", help="the <= 60 second subset")
    p.add_argument("--tolerance-scale", type=parse_fraction, default=Fraction(1))

    return parser


def _load_config(args) -> None:
    if getattr(args, "config", None):
        try:
            overrides = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"bad config file: {exc}") from exc
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise ConfigError(f"unknown config key {key!r}")
            if attr == "epsilon" or attr in ("c", "alpha", "exponent", "tolerance_scale"):
                value = parse_fraction(str(value))
            if attr in ("output_dir",):
                value = Path(value)
            setattr(args, attr, value)


def _config_from(args) -> ExperimentConfig:
    cfg = ExperimentConfig(
        command=args.command,
        lo=args.lo,
        hi=args.hi,
        segment_size=args.segment_size,
        k=args.k,
        epsilon=args.epsilon,
        precision=args.precision,
        output_dir=args.output_dir,
        workers=args.workers,
        seed=args.seed,
    )
    try:
        cfg.sieve_range()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _cmd_series(args, cfg: ExperimentConfig) -> int:
    expansion = series.digits(cfg.k, cfg.precision)
    table = [series.partial_sum(cfg.k, n) for n in range(1, args.terms + 1)]
    write_csv(
        cfg.output_dir / f"series_k{cfg.k}_partials.csv",
        ["n_terms", "value_num", "value_den", "scaled"],
        [[t.n_terms, t.value.numerator, t.value.denominator, int(t.scaled)] for t in table],
        cfg.as_dict(),
    )
    write_json(
        cfg.output_dir / f"series_k{cfg.k}_digits.json",
        {
            "k": cfg.k,
            "digits": expansion.digits,
            "precision": expansion.precision,
            "error_bound": expansion.error_bound,
        },
        cfg.as_dict(),
    )
    print(expansion.digits)
    return 0


def _cmd_sieve(args, cfg: ExperimentConfig) -> int:
    rng = cfg.sieve_range()
    out = cfg.output_dir
    if args.mode == "primes":
        primes = list(sieve.primes_in(rng))
        write_csv(out / "primes.csv", ["p"], [[p] for p in primes], cfg.as_dict())
        write_json(out / "primes_summary.json",
                   {"range": [rng.lo, rng.hi], "count": len(primes)}, cfg.as_dict())
        print(len(primes))
    elif args.mode == "lemma":
        found, count = sieve.find_lemma_primes(rng, args.exponent, args.per_element)
        write_csv(
            out / "lemma_primes.csv",
            ["p", "lpf1", "lpf2", "threshold"],
            [[lp.p, lp.lpf1, lp.lpf2, lp.threshold] for lp in found],
            cfg.as_dict(),
        )
        density = count * log(rng.hi) ** 3 / rng.hi
        write_json(
            out / "lemma_summary.json",
            {"range": [rng.lo, rng.hi], "count": count, "density_ratio": density,
             "exponent": args.exponent},
            cfg.as_dict(),
        )
        print(count)
    elif args.mode == "schinzel":
        found = sieve.find_schinzel(cfg.k, rng)
        write_csv(
            out / f"schinzel_k{cfg.k}.csv",
            ["q", "cofactors", "modulus", "class"],
            [[c.q, ";".join(map(str, c.cofactors)), c.modulus, c.modulus_class] for c in found],
            cfg.as_dict(),
        )
        write_json(out / f"schinzel_k{cfg.k}_summary.json",
                   {"range": [rng.lo, rng.hi], "count": len(found)}, cfg.as_dict())
        print(len(found))
    else:
        found = sieve.find_composite_schinzel(cfg.k, args.p, rng)
        write_csv(
            out / f"composite_k{cfg.k}_p{args.p}.csv",
            ["q", "r", "cofactors", "modulus", "class"],
            [[c.q, c.r, ";".join(map(str, c.cofactors)), c.modulus, c.modulus_class]
             for c in found],
            cfg.as_dict(),
        )
        write_json(out / f"composite_k{cfg.k}_p{args.p}_summary.json",
                   {"range": [rng.lo, rng.hi], "count": len(found), "p": args.p},
                   cfg.as_dict())
        print(len(found))
    return 0


def _cmd_poly(args, cfg: ExperimentConfig) -> int:
    ks = [cfg.k]
    rows = []
    for k in ks:
        i_values = [args.i] if args.i else range(1, k + 1)
        for i in i_values:
            dec = polynomials.derive_P(k, i)
            rows.append(
                {
                    "k": k,
                    "i": i,
                    "quotient": dec.quotient.to_strings(),
                    "remainder": dec.remainder.to_strings(),
                }
            )
    write_json(cfg.output_dir / f"poly_k{cfg.k}.json", {"decompositions": rows}, cfg.as_dict())
    print(json.dumps(rows))
    return 0


def _criterion_batch(args, cfg: ExperimentConfig):
    rng = cfg.sieve_range()
    mode = args.mode
    if mode == "eq1":
        cons = sieve.find_schinzel(cfg.k, rng)
        return [criteria.eq1_eval(cfg.k, c.q, cfg.epsilon) for c in cons]
    if mode == "eq2":
        cons = sieve.find_composite_schinzel(cfg.k, args.p, rng)
        return [criteria.eq2_eval(cfg.k, args.p, c.q, cfg.epsilon) for c in cons]
    if mode == "endgame":
        if args.q1 is not None:
            return [criteria.endgame_eval(cfg.k, args.p, args.q1, cfg.epsilon)]
        import random as _random

        gen = _random.Random(cfg.seed)
        out = []
        for _ in range(1000):
            q1 = gen.randint(args.p**2 + 1, rng.hi)
            if q1 % (args.p**2):
                out.append(criteria.endgame_eval(cfg.k, args.p, q1, cfg.epsilon))
        return out
    if mode == "sigma3":
        qs = [q for q in sieve.primes_in(rng) if q % 2 and q % 3 == 1]
        # per-q evaluations are independent; _pmap keeps the merge order fixed
        return _pmap(partial(criteria.sigma3_window, epsilon=cfg.epsilon), qs, cfg.workers)
    if mode == "condition-i":
        if args.n is not None:
            return [criteria.condition_i_eval(args.n, args.c, args.shift)]
        return [
            criteria.condition_i_eval(n, args.c, args.shift)
            for n in range(max(2, rng.lo), rng.hi + 1)
        ]
    raise ConfigError(f"unsupported criteria mode {mode!r}")


def _cmd_criteria(args, cfg: ExperimentConfig) -> int:
    out = cfg.output_dir
    if args.mode == "subset":
        if args.n is None:
            raise ConfigError("criteria subset needs --n")
        exp = criteria.subset_expand(args.n)
        write_json(
            out / f"subset_{args.n}.json",
            {
                "n": exp.n,
                "primes": list(exp.primes),
                "terms": {str(mask): exp.terms[mask] for mask in sorted(exp.terms)},
                "total": exp.total(),
            },
            cfg.as_dict(),
        )
        print(frac_str(exp.total()))
        return 0
    if args.mode == "small-k":
        rep = criteria.small_k_elimination(args.kind, cfg.sieve_range(), args.c)
        write_csv(
            out / f"smallk_{args.kind}.csv",
            ["n", "distance_num", "distance_den"],
            [[n, d.numerator, d.denominator] for n, d in rep.hits],
            cfg.as_dict(),
        )
        write_json(
            out / f"smallk_{args.kind}_summary.json",
            {
                "kind": rep.kind,
                "range": [rep.lo, rep.hi],
                "c": rep.c,
                "candidates": rep.candidates,
                "count": rep.count,
                "cutoff": rep.cutoff,
                "density": rep.count / max(1, rep.hi - rep.lo + 1),
            },
            cfg.as_dict(),
        )
        print(rep.count)
        return 0
    results = _criterion_batch(args, cfg)
    name = args.mode.replace("-", "_")
    write_csv(out / f"criteria_{name}.csv", CRITERION_HEADER, criterion_rows(results), cfg.as_dict())
    dists = sorted(float(r.distance) for r in results)
    summary = {
        "count": len(results),
        "satisfied": sum(r.satisfied for r in results),
        "min_distance": dists[0] if dists else None,
        "median_distance": dists[len(dists) // 2] if dists else None,
        "max_distance": dists[-1] if dists else None,
    }
    write_json(out / f"criteria_{name}_summary.json", summary, cfg.as_dict())
    print(json.dumps(summary))
    return 0


def _cmd_equidist(args, cfg: ExperimentConfig) -> int:
    out = cfg.output_dir
    include_alpha = not args.no_alpha_factor
    if args.mode == "run":
        spec = equidist.SequenceSpec(args.alpha, args.y, args.length)
        rep = equidist.discrepancy_report(
            spec, equidist.ETParams(args.h_max), equidist.VdCParams(args.ell), include_alpha
        )
        violations = []
        if rep.et_bound < rep.true_discrepancy:
            violations.append({"et_bound": rep.et_bound, "true": rep.true_discrepancy})
            raise InvariantViolation({"criterion": "et-upper-bound", "violations": violations})
        write_csv(
            out / "equidist_sums.csv",
            ["h", "abs_sum", "vdc_bound"],
            [[h, rep.exp_sums[h], rep.vdc_bounds.get(h, "")] for h in sorted(rep.exp_sums)],
            cfg.as_dict(),
        )
        write_json(
            out / "equidist_run.json",
            {
                "alpha": spec.alpha,
                "y": spec.y,
                "length": spec.length,
                "H": args.h_max,
                "ell": args.ell,
                "true_discrepancy": rep.true_discrepancy,
                "et_bound": rep.et_bound,
                "vdc_note": rep.vdc_note,
                "violations": violations,
            },
            cfg.as_dict(),
        )
        print(json.dumps({"true_discrepancy": rep.true_discrepancy, "et_bound": rep.et_bound}))
        return 0
    # sweep: sample alphas from real factor tuples; H follows ln^7(x) under a cap
    import random as _random

    if args.x < 1000:
        raise ConfigError("equidist sweep needs --x >= 1000")
    gen = _random.Random(cfg.seed)
    h_nominal = int(log(args.x) ** 7) + 1
    h_used = min(h_nominal, args.h_cap)
    cut = 2
    while cut ** 9 <= args.x:
        cut += 1
    pool_primes = [p for p in small_primes(args.x // 10) if p >= cut]
    rows = []
    for s in range(args.samples):
        ps = None
        for _ in range(1000):
            k = gen.randint(3, 4)
            trial = sorted(gen.sample(pool_primes[: 40], k))
            prod = 1
            for p in trial:
                prod *= p
            if prod <= args.x:
                ps = trial
                break
        if ps is None:
            raise ConfigError(f"could not draw a factor tuple below x={args.x}")
        alpha = equidist.alpha_from_factors(ps, len(ps))
        y = max(2, min(args.y, args.x // 2))
        spec = equidist.SequenceSpec(alpha, y, args.length)
        rep = equidist.discrepancy_report(spec, equidist.ETParams(h_used))
        target = y / max(log(y), 1.0) ** 6
        bands = _alpha_bands(alpha, y, args.x)
        rows.append(
            [s, frac_str(alpha), y, args.length, h_used, rep.true_discrepancy,
             rep.et_bound, int(rep.true_discrepancy <= target),
             ";".join(map(str, bands))]
        )
    write_csv(
        out / "equidist_sweep.csv",
        ["sample", "alpha", "y", "length", "H", "true_discrepancy", "et_bound",
         "meets_log6_target", "alpha_bands"],
        rows,
        cfg.as_dict(),
    )
    write_json(
        out / "equidist_sweep.json",
        {"x": args.x, "H_nominal": h_nominal, "H_used": h_used, "capped": h_used < h_nominal,
         "samples": args.samples},
        cfg.as_dict(),
    )
    print(json.dumps({"H_used": h_used, "samples": args.samples}))
    return 0


def _alpha_bands(alpha: Fraction, y: int, x: int) -> list[int]:
    """Indices ell with alpha inside [y^ell / log^C x, y^ell * log^C x], C = 14*2^(ell+1).

    Compared in log space; at desk scale the bands are enormous, so this is a
    recorded diagnostic rather than a filter.
    """
    la = log(alpha.numerator) - log(alpha.denominator)
    lly = log(y)
    llx = log(log(x))
    out = []
    for ell in range(2, 10):
        c = 14 * (1 << (ell + 1))
        if ell * lly - c * llx <= la <= ell * lly + c * llx:
            out.append(ell)
    return out


def _cmd_verify_all(args, cfg: ExperimentConfig) -> int:
    ctx = acceptance.AcceptanceContext(
        seed=cfg.seed,
        tolerance_scale=args.tolerance_scale,
        output_dir=cfg.output_dir,
        quick=args.quick,
    )
    results = acceptance.run_all(ctx)
    failures = [r for r in results if not r.passed]
    if failures:
        raise InvariantViolation(
            {
                "criterion": "acceptance",
                "failed": [{"cid": r.cid, "name": r.name, "detail": r.detail} for r in failures],
            }
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _load_config(args)
        cfg = _config_from(args)
        handler = {
            "series": _cmd_series,
            "sieve": _cmd_sieve,
            "poly": _cmd_poly,
            "criteria": _cmd_criteria,
            "equidist": _cmd_equidist,
            "verify-all": _cmd_verify_all,
        }[cfg.command]
        return handler(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(json.dumps({"invariant_violation": exc.payload}, sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
