"""JSON encoding shared by the CLI: exact rationals as "p/q" strings, sorted keys."""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"not a rational: {s!r}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def read_json(path: str | None) -> Any:
    """Load JSON from ``path``, or from stdin when path is None or "-"."""
    if path in (None, "-"):
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def parse_foliation(raw: Any) -> list:
    """{"basis": [["p/q", ...], ...]} -> list of Fraction vectors."""
    try:
        basis = raw["basis"]
    except (KeyError, TypeError):
        raise ValueError('foliation JSON needs a "basis" key') from None
    if not isinstance(basis, list) or not all(isinstance(v, list) for v in basis):
        raise ValueError("basis must be a list of vectors")
    return [[parse_rat(x) for x in v] for v in basis]


def foliation_json(vectors) -> dict:
    return {"basis": [[rat(x) for x in v] for v in vectors]}
