"""Pure-Python implementations of the hot kernels.

These define the reference behaviour; ``_kernels.pyx`` mirrors them.

Exact inputs (ints and Fractions) are scaled to integers over a common
denominator so the inner loops only do integer multiply-adds; each output
coefficient is normalized once at the end. Float inputs take a generic path.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


def integerize(terms):
    """``(items, den)`` with integer numerators over one denominator, or ``None`` for floats."""
    den = 1
    for c in terms.values():
        if isinstance(c, float):
            return None
        den = lcm(den, c.denominator)
    if den == 1:
        return [(w, int(c)) for w, c in terms.items()], 1
    return [(w, c.numerator * (den // c.denominator)) for w, c in terms.items()], den


def _finish(acc, den):
    if den == 1:
        return {w: c for w, c in acc.items() if c}
    return {w: Fraction(c, den) for w, c in acc.items() if c}


def _by_length(items, max_degree):
    buckets = [[] for _ in range(max_degree + 1)]
    for w, c in items:
        if len(w) <= max_degree:
            buckets[len(w)].append((w, c))
    return buckets


def concat_product(p, q, max_degree):
    """Truncated concatenation product of two word -> coefficient maps."""
    ip, iq = integerize(p), integerize(q)
    if ip is None or iq is None:
        p_items, q_items, den = list(p.items()), list(q.items()), None
    else:
        (p_items, dp), (q_items, dq) = ip, iq
        den = dp * dq
    qb = _by_length(q_items, max_degree)
    out = {}
    get = out.get
    for w1, c1 in p_items:
        room = max_degree - len(w1)
        if room < 0:
            continue
        for d in range(room + 1):
            for w2, c2 in qb[d]:
                w = w1 + w2
                out[w] = get(w, 0) + c1 * c2
    if den is None:
        return {w: c for w, c in out.items() if c}
    return _finish(out, den)


def bracket_product(a, b, max_degree, table):
    """Truncated Lie bracket of two Lyndon-basis maps.

    ``table(u, v)`` returns the Lyndon expansion of ``[b(u), b(v)]`` as
    ``((word, int), ...)``.
    """
    ia, ib = integerize(a), integerize(b)
    if ia is None or ib is None:
        a_items, b_items, den = list(a.items()), list(b.items()), None
    else:
        (a_items, da), (b_items, db) = ia, ib
        den = da * db
    bb = _by_length(b_items, max_degree)
    out = {}
    get = out.get
    for u, c1 in a_items:
        room = max_degree - len(u)
        if room < 1:
            continue
        for d in range(1, room + 1):
            for v, c2 in bb[d]:
                expansion = table(u, v)
                if not expansion:
                    continue
                c12 = c1 * c2
                for w, k in expansion:
                    out[w] = get(w, 0) + k * c12
    if den is None:
        return {w: c for w, c in out.items() if c}
    return _finish(out, den)


def linear_combination(pairs):
    """``sum_k c_k * terms_k`` for ``pairs = [(c_k, terms_k), ...]`` of word maps."""
    scaled = []
    den = 1
    for c, terms in pairs:
        if not c or not terms:
            continue
        it = integerize(terms)
        if it is None or isinstance(c, float):
            return _generic_combination(pairs)
        items, d = it
        f = Fraction(c)
        scaled.append((f.numerator, f.denominator * d, items))
        den = lcm(den, f.denominator * d)
    out = {}
    get = out.get
    for num, d, items in scaled:
        k = num * (den // d)
        for w, x in items:
            out[w] = get(w, 0) + k * x
    return _finish(out, den)


def _generic_combination(pairs):
    out = {}
    get = out.get
    for c, terms in pairs:
        if not c:
            continue
        for w, x in terms.items():
            out[w] = get(w, 0) + c * x
    return {w: x for w, x in out.items() if x}


def det_mod_p(matrix, p):
    """Determinant of a square integer matrix modulo the prime ``p`` (< 2**31)."""
    a = np.array(matrix, dtype=object)
    a = np.array(a % p, dtype=np.int64) if a.size else np.zeros((0, 0), dtype=np.int64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError("square matrix required")
    det = 1
    for col in range(n):
        nz = np.nonzero(a[col:, col])[0]
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        pv = int(a[col, col])
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        a[col, col:] = a[col, col:] * inv % p
        below = a[col + 1:, col].copy()
        if below.any():
            a[col + 1:, col:] = (a[col + 1:, col:] - np.outer(below, a[col, col:]) % p) % p
    return det % p


def rank_mod_p(matrix, p):
    """Rank of an integer matrix modulo the prime ``p`` (< 2**31)."""
    a = np.array(matrix, dtype=object)
    if a.size == 0:
        return 0
    a = np.array(a % p, dtype=np.int64)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank, col:] = a[rank, col:] * inv % p
        below = a[rank + 1:, col].copy()
        if below.any():
            a[rank + 1:, col:] = (a[rank + 1:, col:] - np.outer(below, a[rank, col:]) % p) % p
        rank += 1
    return rank
