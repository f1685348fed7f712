"""Deterministic CSV/JSON serialization for experiment reports.

Rationals travel as "num/den" strings in JSON and as split numerator /
denominator columns in CSV.  Every report embeds the producing config and
the package version; nothing time- or machine-dependent is written, so equal
configs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from . import __version__


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as a rational") from exc


def jsonable(obj):
    """Recursively convert report payloads to JSON-safe structures."""
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {f: jsonable(getattr(obj, f)) for f in obj.__dataclass_fields__}
    return obj


def write_json(path: Path, payload: dict, config: dict) -> None:
    body = {"version": __version__, "config": jsonable(config), **jsonable(payload)}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")


def write_csv(path: Path, header: list[str], rows, config: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# version={__version__} config={json.dumps(jsonable(config), sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([frac_str(v) if isinstance(v, Fraction) else v for v in row])


def criterion_rows(results) -> list[list]:
    """CSV rows for CriterionResult batches: split value/distance columns."""
    return [
        [
            r.label,
            r.q_or_n,
            r.value.numerator,
            r.value.denominator,
            r.distance.numerator,
            r.distance.denominator,
            frac_str(r.comparator),
            int(r.satisfied),
        ]
        for r in results
    ]


CRITERION_HEADER = [
    "label", "q_or_n", "value_num", "value_den",
    "distance_num", "distance_den", "comparator", "satisfied",
]
