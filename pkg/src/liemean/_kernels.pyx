# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Exact inputs are scaled to integers over a common denominator as in the
Python version; the accumulation then runs on ``long long`` with overflow
checks and falls back to the Python implementation on overflow.
"""

from fractions import Fraction
from math import lcm

from libcpp.vector cimport vector

from . import _kernels_py
from ._kernels_py import integerize

cdef extern from *:
    """
    static inline int lm_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int lm_add_ovf(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int lm_mul_ovf(long long a, long long b, long long *r) nogil
    int lm_add_ovf(long long a, long long b, long long *r) nogil

cdef long long _LIMIT = 1LL << 62


cdef bint _fits(list items):
    cdef object c
    for _, c in items:
        if c >= _LIMIT or c <= -_LIMIT:
            return False
    return True


cdef list _buckets(list items, int max_degree):
    cdef list out = [[] for _ in range(max_degree + 1)]
    cdef tuple w
    for w, c in items:
        if len(w) <= max_degree:
            (<list>out[len(w)]).append((w, <long long>c))
    return out


cdef dict _finish(dict index, vector[long long]& acc, object den):
    cdef dict out = {}
    cdef long long c
    for w, slot in index.items():
        c = acc[<Py_ssize_t>slot]
        if c:
            out[w] = c if den == 1 else Fraction(c, den)
    return out


def concat_product(dict p, dict q, int max_degree):
    ip = integerize(p)
    iq = integerize(q)
    if ip is None or iq is None:
        return _kernels_py.concat_product(p, q, max_degree)
    p_items, dp = ip
    q_items, dq = iq
    if not (_fits(p_items) and _fits(q_items)):
        return _kernels_py.concat_product(p, q, max_degree)
    cdef list qb = _buckets(q_items, max_degree)
    cdef dict index = {}
    cdef vector[long long] acc
    cdef tuple w1, w2, w
    cdef long long c1, c2, t
    cdef Py_ssize_t slot
    cdef int room, d
    for w1, pc in p_items:
        room = max_degree - len(w1)
        if room < 0:
            continue
        c1 = <long long>pc
        for d in range(room + 1):
            for w2, c2 in <list>qb[d]:
                w = w1 + w2
                if lm_mul_ovf(c1, c2, &t):
                    return _kernels_py.concat_product(p, q, max_degree)
                s = index.get(w)
                if s is None:
                    slot = acc.size()
                    index[w] = slot
                    acc.push_back(t)
                else:
                    slot = <Py_ssize_t>s
                    if lm_add_ovf(acc[slot], t, &acc[slot]):
                        return _kernels_py.concat_product(p, q, max_degree)
    return _finish(index, acc, dp * dq)


def bracket_product(dict a, dict b, int max_degree, table):
    ia = integerize(a)
    ib = integerize(b)
    if ia is None or ib is None:
        return _kernels_py.bracket_product(a, b, max_degree, table)
    a_items, da = ia
    b_items, db = ib
    if not (_fits(a_items) and _fits(b_items)):
        return _kernels_py.bracket_product(a, b, max_degree, table)
    cdef list bb = _buckets(b_items, max_degree)
    cdef dict index = {}
    cdef vector[long long] acc
    cdef tuple u, v, expansion
    cdef long long c1, c2, c12, k, t
    cdef Py_ssize_t slot
    cdef int room, d
    for u, ac in a_items:
        room = max_degree - len(u)
        if room < 1:
            continue
        c1 = <long long>ac
        for d in range(1, room + 1):
            for v, c2 in <list>bb[d]:
                expansion = table(u, v)
                if not expansion:
                    continue
                if lm_mul_ovf(c1, c2, &c12):
                    return _kernels_py.bracket_product(a, b, max_degree, table)
                for w, kk in expansion:
                    k = <long long>kk
                    if lm_mul_ovf(k, c12, &t):
                        return _kernels_py.bracket_product(a, b, max_degree, table)
                    s = index.get(w)
                    if s is None:
                        slot = acc.size()
                        index[w] = slot
                        acc.push_back(t)
                    else:
                        slot = <Py_ssize_t>s
                        if lm_add_ovf(acc[slot], t, &acc[slot]):
                            return _kernels_py.bracket_product(a, b, max_degree, table)
    return _finish(index, acc, da * db)


def linear_combination(list pairs):
    """``sum_k c_k * terms_k``; Python-int accumulation (no overflow concerns)."""
    cdef list scaled = []
    cdef dict out = {}
    den = 1
    for c, terms in pairs:
        if not c or not terms:
            continue
        it = integerize(terms)
        if it is None or isinstance(c, float):
            return _kernels_py.linear_combination(pairs)
        items, d = it
        f = Fraction(c)
        scaled.append((f.numerator, f.denominator * d, items))
        den = lcm(den, f.denominator * d)
    for num, d, items in scaled:
        k = num * (den // d)
        for w, x in <list>items:
            prev = out.get(w)
            out[w] = k * x if prev is None else prev + k * x
    if den == 1:
        return {w: x for w, x in out.items() if x}
    return {w: Fraction(x, den) for w, x in out.items() if x}


cdef long long _powmod(long long base, long long exp, long long p) nogil:
    cdef long long result = 1
    base %= p
    while exp > 0:
        if exp & 1:
            result = result * base % p
        base = base * base % p
        exp >>= 1
    return result


cdef vector[long long] _reduced(matrix, long long p, Py_ssize_t* rows, Py_ssize_t* cols) except *:
    cdef vector[long long] a
    cdef list data = [list(r) for r in matrix]
    rows[0] = len(data)
    cols[0] = len(data[0]) if data else 0
    for r in data:
        if len(r) != cols[0]:
            raise ValueError("ragged matrix")
        for x in r:
            a.push_back(<long long>(x % p))
    return a


def det_mod_p(matrix, long long p):
    """Determinant of a square integer matrix modulo the prime ``p`` (< 2**31)."""
    cdef Py_ssize_t n, m
    cdef vector[long long] a = _reduced(matrix, p, &n, &m)
    if n != m:
        raise ValueError("square matrix required")
    cdef long long det = 1, inv, f, pv
    cdef Py_ssize_t col, r, k, piv
    with nogil:
        for col in range(n):
            piv = -1
            for r in range(col, n):
                if a[r * n + col] != 0:
                    piv = r
                    break
            if piv < 0:
                det = 0
                break
            if piv != col:
                for k in range(n):
                    a[col * n + k], a[piv * n + k] = a[piv * n + k], a[col * n + k]
                det = (p - det) % p
            pv = a[col * n + col]
            det = det * pv % p
            inv = _powmod(pv, p - 2, p)
            for k in range(col, n):
                a[col * n + k] = a[col * n + k] * inv % p
            for r in range(col + 1, n):
                f = a[r * n + col]
                if f:
                    for k in range(col, n):
                        a[r * n + k] = (a[r * n + k] - f * a[col * n + k] % p + p) % p
    return int(det % p)


def rank_mod_p(matrix, long long p):
    """Rank of an integer matrix modulo the prime ``p`` (< 2**31)."""
    cdef Py_ssize_t rows, cols
    cdef vector[long long] a = _reduced(matrix, p, &rows, &cols)
    cdef Py_ssize_t rank = 0, col, r, k, piv
    cdef long long inv, f
    with nogil:
        for col in range(cols):
            if rank == rows:
                break
            piv = -1
            for r in range(rank, rows):
                if a[r * cols + col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for k in range(cols):
                    a[rank * cols + k], a[piv * cols + k] = a[piv * cols + k], a[rank * cols + k]
            inv = _powmod(a[rank * cols + col], p - 2, p)
            for k in range(col, cols):
                a[rank * cols + k] = a[rank * cols + k] * inv % p
            for r in range(rank + 1, rows):
                f = a[r * cols + col]
                if f:
                    for k in range(col, cols):
                        a[r * cols + k] = (a[r * cols + k] - f * a[rank * cols + k] % p + p) % p
            rank += 1
    return int(rank)
