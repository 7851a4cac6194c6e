"""Small exact linear algebra over the rationals.

Dense Gaussian elimination on ``Fraction`` matrices, sparse echelon forms for
span/intersection dimensions, and modular determinants that certify
nonsingularity of integer matrices cheaply.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from . import kernels

# primes below 2**31 keep int64 products exact in the modular kernels
PRIMES = (2147483629, 2147483587, 2147483579)


class SingularMatrixError(ArithmeticError):
    pass


def solve_exact(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``a x = b`` exactly. Raises :class:`SingularMatrixError`."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    if len(m) != n or any(len(row) != n + 1 for row in m):
        raise ValueError("square system required")
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {col})")
        m[col], m[piv] = m[piv], m[col]
        prow = m[col]
        inv = 1 / prow[col]
        if inv != 1:
            prow[col:] = [x * inv for x in prow[col:]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                row = m[r]
                for k in range(col, n + 1):
                    if prow[k]:
                        row[k] -= f * prow[k]
    return [row[n] for row in m]


def identity_minus(b: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(b)
    return [[(1 if i == j else 0) - Fraction(b[i][j]) for j in range(n)] for i in range(n)]


def nonsingular_mod_p(matrix: Sequence[Sequence[int]], primes: Iterable[int] = PRIMES) -> bool | None:
    """``True`` if some prime certifies ``det != 0``; ``None`` if none does.

    A nonzero determinant modulo a prime proves the integer determinant is
    nonzero. All-zero residues are inconclusive rather than a proof of
    singularity.
    """
    if not len(matrix):
        return True
    for p in primes:
        if kernels.det_mod_p(matrix, p):
            return True
    return None


class Echelon:
    """Incremental row-echelon basis of sparse vectors ``{key: coefficient}``.

    Keys are ordered by ``order`` (default: natural ordering of the keys).
    """

    def __init__(self, order=None):
        self._order = order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}

    def _lead(self, vec: Mapping) -> Hashable:
        return min(vec, key=self._order)

    def reduce(self, vec: Mapping) -> dict:
        v = {k: c for k, c in vec.items() if c}
        while v:
            p = self._lead(v)
            row = self.rows.get(p)
            if row is None:
                return v
            f = v[p]
            for k, c in row.items():
                x = v.get(k, 0) - f * c
                if x:
                    v[k] = x
                else:
                    v.pop(k, None)
        return v

    def insert(self, vec: Mapping) -> bool:
        """Add ``vec`` to the span; ``True`` if it was independent."""
        v = self.reduce(vec)
        if not v:
            return False
        p = self._lead(v)
        inv = 1 / Fraction(v[p])
        self.rows[p] = {k: c * inv for k, c in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)


def span_rank(vectors: Iterable[Mapping], order=None) -> int:
    e = Echelon(order)
    for v in vectors:
        e.insert(v)
    return e.rank


def intersection_dimension(first: Sequence[Mapping], second: Sequence[Mapping], order=None) -> int:
    """``dim(span(first) ∩ span(second))`` via ``dim U + dim V - dim(U + V)``."""
    r1 = span_rank(first, order)
    r2 = span_rank(second, order)
    r12 = span_rank(list(first) + list(second), order)
    return r1 + r2 - r12
