"""Exact arithmetic on degree-truncated elements of the free Lie algebra.

Elements live on the Lyndon basis: the word ``w`` stands for its standard
bracketing ``b(w) = [b(u), b(v)]`` where ``(u, v)`` is the standard
factorization. Brackets of basis elements are rewritten back onto the basis
and memoized, since the same pairs recur constantly inside BCH and
substitution.
"""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import kernels
from ._coeff import DOT, as_rational, format_coeff, is_exact, join_terms, split_terms
from .assoc import AssocSeries
from .lyndon import Word, format_word, is_lyndon, parse_word, standard_factorization


@lru_cache(maxsize=None)
def lyndon_bracket(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """Expansion of ``[b(u), b(v)]`` on the Lyndon basis, integer coefficients."""
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in lyndon_bracket(v, u))
    if len(u) == 1:
        return ((u + v, 1),)
    u1, u2 = standard_factorization(u)
    if u2 >= v:
        return ((u + v, 1),)
    # [[u1, u2], v] = [u1, [u2, v]] - [u2, [u1, v]]
    acc: dict[Word, int] = {}
    for w, c in lyndon_bracket(u2, v):
        for w2, c2 in lyndon_bracket(u1, w):
            acc[w2] = acc.get(w2, 0) + c * c2
    for w, c in lyndon_bracket(u1, v):
        for w2, c2 in lyndon_bracket(u2, w):
            acc[w2] = acc.get(w2, 0) - c * c2
    return tuple(sorted((w, c) for w, c in acc.items() if c))


@lru_cache(maxsize=None)
def word_expansion(word: Word) -> tuple[tuple[Word, int], ...]:
    """Commutator expansion of ``b(word)`` in the tensor algebra."""
    if len(word) == 1:
        return ((word, 1),)
    u, v = standard_factorization(word)
    pu, pv = dict(word_expansion(u)), dict(word_expansion(v))
    d = len(word)
    uv = kernels.concat_product(pu, pv, d)
    vu = kernels.concat_product(pv, pu, d)
    for w, c in vu.items():
        uv[w] = uv.get(w, 0) - c
    return tuple(sorted((w, c) for w, c in uv.items() if c))


@lru_cache(maxsize=None)
def left_normed(word: Word) -> tuple[tuple[Word, int], ...]:
    """``[...[[x_w1, x_w2], x_w3], ..., x_wd]`` on the Lyndon basis."""
    if len(word) == 1:
        return ((word, 1),)
    head = dict(left_normed(word[:-1]))
    out = kernels.bracket_product(head, {word[-1:]: 1}, len(word), lyndon_bracket)
    return tuple(sorted(out.items()))


def _sort_key(w: Word):
    return (len(w), w)


class LieSeries:
    """Truncated element of the free Lie algebra ``L[x_1..x_n]``.

    ``terms`` maps Lyndon words to coefficients (absent means zero).
    Coefficients are normally :class:`fractions.Fraction`; float series are
    allowed for numerical iteration but cannot be written as JSON.

    Equality compares coefficients on the common truncation.
    """

    __slots__ = ("n", "max_degree", "terms")

    def __init__(self, n: int, max_degree: int, terms=None, *, _trusted: bool = False):
        if n < 1:
            raise ValueError(f"generator count must be >= 1, got {n}")
        if max_degree < 1:
            raise ValueError(f"max_degree must be >= 1, got {max_degree}")
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
            if not is_lyndon(w):
                raise ValueError(f"{w} is not a Lyndon word")
            if len(w) <= max_degree and c:
                clean[w] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int, max_degree: int) -> "LieSeries":
        return cls(n, max_degree, {}, _trusted=True)

    @classmethod
    def generator(cls, i: int, n: int, max_degree: int) -> "LieSeries":
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        return cls(n, max_degree, {(i,): Fraction(1)}, _trusted=True)

    @classmethod
    def basis(cls, word: Sequence[int], n: int, max_degree: int, coeff=1) -> "LieSeries":
        return cls(n, max_degree, {tuple(word): as_rational(coeff) if is_exact(coeff) else coeff})

    # -- basic access ----------------------------------------------------------

    def coefficient(self, word: Sequence[int]):
        return self.terms.get(tuple(word), Fraction(0))

    def graded_component(self, r: int) -> "LieSeries":
        """Terms with exactly ``r`` brackets (degree ``r + 1``)."""
        return LieSeries(
            self.n, self.max_degree, {w: c for w, c in self.terms.items() if len(w) == r + 1}, _trusted=True
        )

    def degree_part(self, d: int) -> "LieSeries":
        return self.graded_component(d - 1)

    def truncate(self, max_degree: int) -> "LieSeries":
        d = min(max_degree, self.max_degree)
        return LieSeries(self.n, d, {w: c for w, c in self.terms.items() if len(w) <= d}, _trusted=True)

    def with_max_degree(self, max_degree: int) -> "LieSeries":
        """Same terms viewed with another truncation bound (dropping what exceeds it)."""
        return LieSeries(
            self.n, max_degree, {w: c for w, c in self.terms.items() if len(w) <= max_degree}, _trusted=True
        )

    def embed(self, n: int) -> "LieSeries":
        """Regard this series as living in ``L[x_1..x_n]`` for a larger ``n``."""
        if n < self.n:
            raise ValueError(f"cannot embed {self.n} generators into {n}")
        return LieSeries(n, self.max_degree, dict(self.terms), _trusted=True)

    def is_zero(self) -> bool:
        return not self.terms

    def map_coefficients(self, f: Callable) -> "LieSeries":
        out = {}
        for w, c in self.terms.items():
            c = f(c)
            if c:
                out[w] = c
        return LieSeries(self.n, self.max_degree, out, _trusted=True)

    def to_float(self) -> "LieSeries":
        return self.map_coefficients(float)

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: "LieSeries") -> int:
        if not isinstance(other, LieSeries):
            raise TypeError(f"expected LieSeries, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"generator counts differ: {self.n} vs {other.n}")
        return min(self.max_degree, other.max_degree)

    def __add__(self, other):
        d = self._check(other)
        out = {w: c for w, c in self.terms.items() if len(w) <= d}
        for w, c in other.terms.items():
            if len(w) <= d:
                out[w] = out.get(w, 0) + c
        return LieSeries(self.n, d, {w: c for w, c in out.items() if c}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LieSeries(self.n, self.max_degree, {w: -c for w, c in self.terms.items()}, _trusted=True)

    def __mul__(self, scalar):
        if isinstance(scalar, (LieSeries, AssocSeries)):
            return NotImplemented
        if not scalar:
            return LieSeries.zero(self.n, self.max_degree)
        return LieSeries(self.n, self.max_degree, {w: scalar * c for w, c in self.terms.items()}, _trusted=True)

    __rmul__ = __mul__

    def bracket(self, other: "LieSeries") -> "LieSeries":
        d = self._check(other)
        return LieSeries(self.n, d, kernels.bracket_product(self.terms, other.terms, d, lyndon_bracket), _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, LieSeries):
            return NotImplemented
        if other.n != self.n:
            return False
        d = min(self.max_degree, other.max_degree)
        mine = {w: c for w, c in self.terms.items() if len(w) <= d}
        theirs = {w: c for w, c in other.terms.items() if len(w) <= d}
        return mine == theirs

    __hash__ = None  # type: ignore[assignment]

    # -- serialization --------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Word, object]]:
        return [(w, self.terms[w]) for w in sorted(self.terms, key=_sort_key)]

    def to_text(self) -> str:
        """Canonical text, e.g. ``1/2·[1] + 1/2·[2] − 1/48·[112] − 1/48·[122]``."""
        parts = [(c < 0, f"{format_coeff(c)}{DOT}[{format_word(w, self.n)}]") for w, c in self.sorted_terms()]
        return join_terms(parts)

    @classmethod
    def from_text(cls, text: str, n: int, max_degree: int) -> "LieSeries":
        terms = {}
        for sign, body in split_terms(text):
            coeff, _, bracketed = body.partition(DOT)
            if not (bracketed.startswith("[") and bracketed.endswith("]")):
                raise ValueError(f"malformed term {body!r}")
            w = parse_word(bracketed[1:-1], n)
            terms[w] = terms.get(w, 0) + sign * as_rational(coeff)
        return cls(n, max_degree, terms)

    def to_dict(self) -> dict:
        if not all(is_exact(c) for c in self.terms.values()):
            raise TypeError("only exact (rational) series serialize to JSON")
        out = []
        for w, c in self.sorted_terms():
            c = Fraction(c)
            out.append({"word": format_word(w, self.n), "num": str(c.numerator), "den": str(c.denominator)})
        return {"n": self.n, "degree": self.max_degree, "terms": out}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "LieSeries":
        n, d = int(data["n"]), int(data["degree"])
        terms = {}
        for t in data["terms"]:
            den = int(t["den"])
            if den <= 0:
                raise ValueError("denominator must be positive")
            terms[parse_word(t["word"], n)] = Fraction(int(t["num"]), den)
        return cls(n, d, terms)

    @classmethod
    def from_json(cls, text: str) -> "LieSeries":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LieSeries(n={self.n}, D={self.max_degree}: {self.to_text()})"


def generators(n: int, max_degree: int) -> list[LieSeries]:
    return [LieSeries.generator(i, n, max_degree) for i in range(1, n + 1)]


def add(a: LieSeries, b: LieSeries) -> LieSeries:
    return a + b


def scale(c, a: LieSeries) -> LieSeries:
    return a * c


def bracket(a: LieSeries, b: LieSeries) -> LieSeries:
    return a.bracket(b)


def linear_combination(items: Iterable[tuple[object, LieSeries]]) -> LieSeries:
    items = list(items)
    if not items:
        raise ValueError("empty combination")
    n = items[0][1].n
    if any(s.n != n for _, s in items):
        raise ValueError("generator counts differ")
    d = min(s.max_degree for _, s in items)
    pairs = [(c, {w: x for w, x in s.terms.items() if len(w) <= d}) for c, s in items]
    return LieSeries(n, d, kernels.linear_combination(pairs), _trusted=True)


def graded_component(a: LieSeries, r: int) -> LieSeries:
    return a.graded_component(r)


def coefficient(a: LieSeries, word: Sequence[int]):
    return a.coefficient(word)


def to_associative(a: LieSeries) -> AssocSeries:
    """Expand every basis bracket into commutators of words."""
    out: dict = {}
    for w, c in a.terms.items():
        for v, k in word_expansion(w):
            out[v] = out.get(v, 0) + k * c
    return AssocSeries(a.n, a.max_degree, {v: c for v, c in out.items() if c}, _trusted=True)


def dynkin_project(p: AssocSeries) -> LieSeries:
    """Dynkin map ``w1...wd -> (1/d) [...[x_w1, x_w2], ..., x_wd]``.

    It is the identity on Lie elements, so it recovers the Lie element behind
    an associative series known to be primitive.
    """
    if p.constant_term:
        raise ValueError("dynkin_project needs a series with zero constant term")
    if p.max_degree < 1:
        raise ValueError("dynkin_project needs max_degree >= 1")
    out: dict = {}
    for w, c in p.terms.items():
        share = Fraction(c, len(w)) if isinstance(c, int) else c / len(w)
        for v, k in left_normed(w):
            out[v] = out.get(v, 0) + k * share
    return LieSeries(p.n, p.max_degree, {v: c for v, c in out.items() if c}, _trusted=True)


def substitute(a: LieSeries, images: Sequence[LieSeries], max_degree: int | None = None) -> LieSeries:
    """Apply the Lie homomorphism ``x_i -> images[i-1]`` to ``a``.

    The result lives on the images' generators, truncated at their common
    bound (or ``max_degree`` when smaller).
    """
    if len(images) != a.n:
        raise ValueError(f"need {a.n} images, got {len(images)}")
    m = images[0].n
    if any(im.n != m for im in images):
        raise ValueError("images must share a generator count")
    d = min(im.max_degree for im in images)
    if max_degree is not None:
        d = min(d, max_degree)
    base = [{w: c for w, c in im.terms.items() if len(w) <= d} for im in images]
    memo: dict[Word, dict] = {}

    def image(w: Word) -> dict:
        r = memo.get(w)
        if r is None:
            if len(w) == 1:
                r = base[w[0] - 1]
            else:
                u, v = standard_factorization(w)
                r = kernels.bracket_product(image(u), image(v), d, lyndon_bracket)
            memo[w] = r
        return r

    # images have no constant part, so words longer than d map to zero
    pairs = [(c, image(w)) for w, c in a.terms.items() if len(w) <= d]
    return LieSeries(m, d, kernels.linear_combination(pairs), _trusted=True)


def _check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    return sigma


def permute(a: LieSeries, sigma: Sequence[int]) -> LieSeries:
    """Relabel generators ``x_i -> x_{sigma[i-1]}`` and renormalize."""
    sigma = _check_permutation(sigma, a.n)
    return substitute(a, [LieSeries.generator(s, a.n, a.max_degree) for s in sigma])


def symmetrize(a: LieSeries) -> LieSeries:
    """Average of ``permute(a, sigma)`` over the whole symmetric group."""
    count = math.factorial(a.n)
    total = LieSeries.zero(a.n, a.max_degree)
    for sigma in itertools.permutations(range(1, a.n + 1)):
        total = total + permute(a, sigma)
    return total * Fraction(1, count)


def ad_monomial(ops: Sequence[int], target: int, n: int, max_degree: int) -> LieSeries:
    """``ad_{x_o1} ad_{x_o2} ... ad_{x_ok} (x_target)`` on the Lyndon basis.

    ``ops`` is read left to right as written, so ``ad_monomial([1, 1], 2)`` is
    ``[x1, [x1, x2]]``.
    """
    acc = LieSeries.generator(target, n, max_degree)
    for o in reversed(ops):
        acc = LieSeries.generator(o, n, max_degree).bracket(acc)
    return acc
