"""Truncated Baker–Campbell–Hausdorff composition.

Everything goes through the tensor algebra: exponentiate, multiply, take the
logarithm and project back with the Dynkin map. One mechanism serves the
universal two-letter series and composition of arbitrary Lie series.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .assoc import AssocSeries, assoc_mul
from .liealg import LieSeries, dynkin_project, substitute, to_associative

__all__ = [
    "AssocSeries",
    "assoc_mul",
    "assoc_exp",
    "assoc_log",
    "bch_universal",
    "bch_compose",
    "bch_multi",
    "ad_exp",
]


def assoc_exp(p: AssocSeries) -> AssocSeries:
    """``sum_k p^k / k!`` up to the truncation degree; ``p`` must have no constant term."""
    if p.constant_term:
        raise ValueError("assoc_exp needs a series with zero constant term")
    result = AssocSeries.one(p.n, p.max_degree)
    term = result
    for k in range(1, p.max_degree + 1):
        term = assoc_mul(term, p) * Fraction(1, k)
        if term.is_zero():
            break
        result = result + term
    return result


def assoc_log(q: AssocSeries) -> AssocSeries:
    """``sum_k (-1)^(k+1) (q - 1)^k / k``; ``q`` must have constant term 1."""
    if q.constant_term != 1:
        raise ValueError("assoc_log needs a series with constant term 1")
    r = q - AssocSeries.one(q.n, q.max_degree)
    result = AssocSeries(q.n, q.max_degree, {}, _trusted=True)
    power = r
    for k in range(1, q.max_degree + 1):
        if power.is_zero():
            break
        result = result + power * Fraction((-1) ** (k + 1), k)
        power = assoc_mul(power, r)
    return result


def bch_compose(a: LieSeries, b: LieSeries) -> LieSeries:
    """``BCH(a, b)`` with ``exp(a) exp(b) = exp(BCH(a, b))``, truncated."""
    d = a._check(b)
    if a.is_zero():
        return b.truncate(d)
    if b.is_zero():
        return a.truncate(d)
    ea = assoc_exp(to_associative(a.truncate(d)))
    eb = assoc_exp(to_associative(b.truncate(d)))
    return dynkin_project(assoc_log(assoc_mul(ea, eb)))


@lru_cache(maxsize=None)
def _bch_universal(max_degree: int) -> LieSeries:
    x = LieSeries.generator(1, 2, max_degree)
    y = LieSeries.generator(2, 2, max_degree)
    return bch_compose(x, y)


def bch_universal(max_degree: int) -> LieSeries:
    """``BCH(x1, x2)`` in ``L[x1, x2]`` up to ``max_degree``."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    return _bch_universal(max_degree)


def bch_multi(items: Sequence[LieSeries]) -> LieSeries:
    """Left fold of :func:`bch_compose`: ``exp(result) = exp(items[0]) ... exp(items[-1])``."""
    if not items:
        raise ValueError("bch_multi needs at least one series")
    acc = items[0]
    for s in items[1:]:
        acc = bch_compose(acc, s)
    return acc.truncate(min(s.max_degree for s in items))


def ad_exp(e: LieSeries, a: LieSeries) -> LieSeries:
    """``exp(ad_e)(a) = sum_k ad_e^k(a) / k!``, finite under truncation."""
    d = e._check(a)
    total = a.truncate(d)
    term = total
    k = 0
    while not term.is_zero():
        k += 1
        term = e.bracket(term) * Fraction(1, k)
        total = total + term
    return total


def bch_via_universal(a: LieSeries, b: LieSeries) -> LieSeries:
    """Substitute ``a, b`` into the universal two-letter series."""
    d = a._check(b)
    return substitute(bch_universal(d), [a.truncate(d), b.truncate(d)])
