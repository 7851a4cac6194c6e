"""Coefficient helpers shared by the series types."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

MINUS = "−"
DOT = "·"


def as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.replace(MINUS, "-"))
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def is_exact(c) -> bool:
    return isinstance(c, (int, Rational))


def format_coeff(c) -> str:
    """Magnitude of ``c`` for text output; the sign is rendered separately."""
    c = abs(c)
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c) if is_exact(c) else repr(float(c))


def join_terms(parts: list[tuple[bool, str]]) -> str:
    """Join ``(negative, body)`` pairs as ``a + b − c``."""
    if not parts:
        return "0"
    out = []
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out.append(f"{MINUS}{body}" if neg else body)
        else:
            out.append(f" {MINUS} {body}" if neg else f" + {body}")
    return "".join(out)


def split_terms(text: str) -> list[tuple[int, str]]:
    """Inverse of :func:`join_terms`: ``[(sign, body), ...]``."""
    text = text.strip().replace(MINUS, "-")
    if text == "0":
        return []
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    pieces = re.split(r" ([+-]) ", text)
    out = [(sign, pieces[0].strip())]
    for op, body in zip(pieces[1::2], pieces[2::2]):
        out.append((1 if op == "+" else -1, body.strip()))
    return out
