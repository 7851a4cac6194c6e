"""Lyndon words on the ordered alphabet 1 < 2 < ... < n.

Lyndon words label the basis of the free Lie algebra used throughout the
package. A word is a plain tuple of positive ints; degree is its length.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

Word = tuple[int, ...]


def is_lyndon(word: Sequence[int]) -> bool:
    """True when ``word`` is strictly smaller than each of its proper rotations."""
    w = tuple(word)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _duval(n: int, max_degree: int) -> Iterator[Word]:
    # Duval's successor: all Lyndon words of length <= max_degree in lex order.
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(x for x in w)
        m = len(w)
        while len(w) < max_degree:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()


def generate_lyndon_words(n: int, max_degree: int) -> list[Word]:
    """All Lyndon words over ``{1..n}`` of length at most ``max_degree``.

    Words are ordered by degree, then lexicographically within a degree.
    """
    if n < 1:
        raise ValueError(f"generator count must be >= 1, got {n}")
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    words = (tuple(x + 1 for x in w) for w in _duval(n, max_degree))
    return sorted(words, key=lambda w: (len(w), w))


def lyndon_words_of_degree(n: int, degree: int) -> list[Word]:
    return [w for w in generate_lyndon_words(n, degree) if len(w) == degree]


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> tuple[Word, Word]:
    """Split a Lyndon word ``w = u v`` with ``v`` its longest proper Lyndon suffix."""
    if len(word) < 2:
        raise ValueError(f"standard factorization needs degree >= 2, got {word!r}")
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise AssertionError("unreachable: the last letter is always Lyndon")


def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius is defined for positive integers")
    result, p = 1, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    return -result if k > 1 else result


def witt_dimension(n: int, d: int) -> int:
    """Dimension of the degree-``d`` piece of the free Lie algebra on ``n`` generators."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    total = sum(mobius(e) * n ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


def format_word(word: Sequence[int], n: int) -> str:
    """Digits for ``n <= 9`` (``"112"``), comma-separated ints otherwise."""
    if n <= 9:
        return "".join(str(x) for x in word)
    return ",".join(str(x) for x in word)


def parse_word(text: str, n: int) -> Word:
    text = text.strip()
    if not text:
        raise ValueError("empty word")
    if n <= 9 and "," not in text:
        letters = tuple(int(ch) for ch in text)
    else:
        letters = tuple(int(tok) for tok in text.split(","))
    if any(not 1 <= x <= n for x in letters):
        raise ValueError(f"word {text!r} has letters outside 1..{n}")
    return letters
