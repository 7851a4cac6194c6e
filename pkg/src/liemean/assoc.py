"""Truncated series in the free associative algebra (the tensor algebra)."""

from __future__ import annotations

from fractions import Fraction

from . import kernels
from ._coeff import DOT, format_coeff, join_terms
from .lyndon import Word, format_word


class AssocSeries:
    """Degree-truncated element of the free associative algebra on ``n`` letters.

    ``terms`` maps words (tuples over ``1..n``, the empty tuple being the unit)
    to coefficients. Words longer than ``max_degree`` and zero coefficients are
    dropped on construction.
    """

    __slots__ = ("n", "max_degree", "terms")

    def __init__(self, n: int, max_degree: int, terms=None, *, _trusted: bool = False):
        if n < 1 or max_degree < 0:
            raise ValueError(f"bad AssocSeries shape n={n}, max_degree={max_degree}")
        self.n = n
        self.max_degree = max_degree
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 1 <= x <= n for x in w):
                raise ValueError(f"word {w} has letters outside 1..{n}")
            if len(w) <= max_degree and c:
                clean[w] = c
        self.terms = clean

    @classmethod
    def one(cls, n: int, max_degree: int) -> "AssocSeries":
        return cls(n, max_degree, {(): Fraction(1)}, _trusted=True)

    @classmethod
    def word(cls, w, n: int, max_degree: int, coeff=1) -> "AssocSeries":
        return cls(n, max_degree, {tuple(w): Fraction(coeff)})

    @classmethod
    def letter(cls, i: int, n: int, max_degree: int) -> "AssocSeries":
        return cls.word((i,), n, max_degree)

    @property
    def constant_term(self):
        return self.terms.get((), 0)

    def truncate(self, max_degree: int) -> "AssocSeries":
        d = min(max_degree, self.max_degree)
        return AssocSeries(self.n, d, {w: c for w, c in self.terms.items() if len(w) <= d}, _trusted=True)

    def _check(self, other: "AssocSeries") -> int:
        if not isinstance(other, AssocSeries):
            raise TypeError(f"expected AssocSeries, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"generator counts differ: {self.n} vs {other.n}")
        return min(self.max_degree, other.max_degree)

    def __add__(self, other):
        d = self._check(other)
        out = {w: c for w, c in self.terms.items() if len(w) <= d}
        for w, c in other.terms.items():
            if len(w) <= d:
                out[w] = out.get(w, 0) + c
        return AssocSeries(self.n, d, {w: c for w, c in out.items() if c}, _trusted=True)

    def __neg__(self):
        return AssocSeries(self.n, self.max_degree, {w: -c for w, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AssocSeries):
            return assoc_mul(self, other)
        if not other:
            return AssocSeries(self.n, self.max_degree, {}, _trusted=True)
        return AssocSeries(self.n, self.max_degree, {w: other * c for w, c in self.terms.items()}, _trusted=True)

    def __rmul__(self, scalar):
        return self * scalar

    def __eq__(self, other):
        if not isinstance(other, AssocSeries):
            return NotImplemented
        d = self._check(other)
        mine = {w: c for w, c in self.terms.items() if len(w) <= d}
        theirs = {w: c for w, c in other.terms.items() if len(w) <= d}
        return mine == theirs

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.terms

    def to_text(self) -> str:
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            parts.append((c < 0, f"{format_coeff(c)}{DOT}<{format_word(w, self.n)}>"))
        return join_terms(parts)

    def __repr__(self):
        return f"AssocSeries(n={self.n}, D={self.max_degree}: {self.to_text()})"


def assoc_mul(p: AssocSeries, q: AssocSeries) -> AssocSeries:
    """Concatenation product, truncated at the smaller degree bound."""
    d = p._check(q)
    return AssocSeries(p.n, d, kernels.concat_product(p.terms, q.terms, d), _trusted=True)
