"""Exact numeric values: integers, rationals, and an infinity sentinel.

Costs, capacities, supplies, and budgets are integers or `Fraction`s;
``INF`` (and ``NEG_INF`` for the double-cover progress function) are the
saturating sentinels ordered beyond every finite value.  No floats are
used for finite arithmetic anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

INF = float("inf")
NEG_INF = float("-inf")

Num = Union[int, Fraction, float]  # float only ever holds +-inf


def is_finite(x: Num) -> bool:
    return x != INF and x != NEG_INF


def as_exact(x: Num) -> Num:
    """Normalize to int / Fraction / infinity; reject finite floats."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, float):
        if x == INF or x == NEG_INF:
            return x
        raise TypeError(f"finite floats are not allowed: {x!r}")
    raise TypeError(f"not a supported number: {x!r}")


def parse_number(tok) -> Num:
    """Parse a wire-format number: int, "p/q" rational, "inf", or "-inf"."""
    if isinstance(tok, bool):
        raise ValueError(f"expected a number, got boolean {tok!r}")
    if isinstance(tok, int):
        return tok
    if isinstance(tok, str):
        if tok == "inf":
            return INF
        if tok == "-inf":
            return NEG_INF
        try:
            frac = Fraction(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad number token {tok!r}") from exc
        return as_exact(frac)
    raise ValueError(f"expected int or string number, got {tok!r}")


def format_number(x: Num):
    """Wire-format counterpart of parse_number; canonical per value."""
    x = as_exact(x)
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x
