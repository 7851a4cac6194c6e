import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from liemean import _kernels_py, kernels
from liemean.liealg import lyndon_bracket
from liemean.linalg import (
    PRIMES,
    Echelon,
    SingularMatrixError,
    identity_minus,
    intersection_dimension,
    nonsingular_mod_p,
    solve_exact,
    span_rank,
)
from liemean.lyndon import generate_lyndon_words

try:
    from liemean import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

coeff = st.one_of(st.integers(-9, 9), st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9)))


def word_maps(n=2, max_len=4, allow_empty=True):
    letters = st.lists(st.integers(1, n), min_size=0 if allow_empty else 1, max_size=max_len).map(tuple)
    return st.dictionaries(letters, coeff, max_size=6).map(lambda d: {k: v for k, v in d.items() if v})


def lyndon_maps(n=3, d=4):
    return st.dictionaries(st.sampled_from(generate_lyndon_words(n, d)), coeff, max_size=6).map(
        lambda m: {k: v for k, v in m.items() if v}
    )


def naive_concat(p, q, d):
    out = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            if len(w1) + len(w2) <= d:
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


@given(word_maps(), word_maps(), st.integers(0, 6))
def test_python_concat_matches_naive(p, q, d):
    assert _kernels_py.concat_product(p, q, d) == naive_concat(p, q, d)


@needs_compiled
@given(word_maps(), word_maps(), st.integers(0, 6))
def test_compiled_concat_matches_python(p, q, d):
    assert compiled.concat_product(p, q, d) == _kernels_py.concat_product(p, q, d)


@needs_compiled
@given(lyndon_maps(), lyndon_maps(), st.integers(1, 6))
def test_compiled_bracket_matches_python(a, b, d):
    assert compiled.bracket_product(a, b, d, lyndon_bracket) == _kernels_py.bracket_product(a, b, d, lyndon_bracket)


@needs_compiled
@given(st.lists(st.tuples(coeff, lyndon_maps()), max_size=5))
def test_compiled_linear_combination_matches_python(pairs):
    assert compiled.linear_combination(pairs) == _kernels_py.linear_combination(pairs)


def test_linear_combination_exact_and_float():
    pairs = [(Fraction(1, 2), {(1,): Fraction(2, 3)}), (3, {(1,): Fraction(-1, 9), (2,): 1})]
    assert kernels.linear_combination(pairs) == {(2,): 3}
    got = kernels.linear_combination([(0.5, {(1,): 1.0})])
    assert got == {(1,): 0.5}


@needs_compiled
def test_compiled_overflow_falls_back():
    big = {(1,): 2**61, (2,): 3}
    assert compiled.concat_product(big, big, 2) == naive_concat(big, big, 2)


@needs_compiled
def test_compiled_float_inputs():
    p = {(1,): 0.5, (2,): 1.5}
    assert compiled.concat_product(p, p, 2) == naive_concat(p, p, 2)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def _sympy_det_mod(m, p):
    return int(sympy.Matrix(m).det()) % p


@pytest.mark.parametrize("seed", range(5))
def test_det_mod_p_matches_exact_determinant(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    m = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
    p = PRIMES[0]
    assert _kernels_py.det_mod_p(m, p) == _sympy_det_mod(m, p)
    if compiled is not None:
        assert compiled.det_mod_p(m, p) == _sympy_det_mod(m, p)


@pytest.mark.parametrize("seed", range(5))
def test_rank_mod_p_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-5, 6, size=(6, 3)) @ rng.integers(-5, 6, size=(3, 7))
    m = a.tolist()
    assert _kernels_py.rank_mod_p(m, PRIMES[1]) == np.linalg.matrix_rank(a)
    if compiled is not None:
        assert compiled.rank_mod_p(m, PRIMES[1]) == np.linalg.matrix_rank(a)


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        kernels.det_mod_p([[1, 2, 3], [4, 5, 6]], PRIMES[0])


def test_solve_exact():
    a = [[2, 1], [1, 3]]
    assert solve_exact(a, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(SingularMatrixError):
        solve_exact([[1, 2], [2, 4]], [1, 2])


def test_identity_minus():
    assert identity_minus([[Fraction(1, 2), 0], [1, 0]]) == [[Fraction(1, 2), 0], [-1, 1]]


def test_nonsingular_certificate():
    assert nonsingular_mod_p([[1, 0], [0, 1]]) is True
    assert nonsingular_mod_p([[1, 2], [2, 4]]) is None


def test_echelon_spans():
    vecs = [{"a": 1, "b": 1}, {"b": 1, "c": 1}, {"a": 1, "c": -1}]
    assert span_rank(vecs) == 2
    e = Echelon()
    for v in vecs[:2]:
        e.insert(v)
    assert e.contains({"a": 1, "c": -1})
    assert intersection_dimension(vecs[:1], vecs[1:]) == 1
