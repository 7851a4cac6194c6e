import random
from fractions import Fraction

import pytest
from hypothesis import given

from liemean.assoc import AssocSeries, assoc_mul
from liemean.bch import ad_exp, assoc_exp, assoc_log, bch_compose, bch_multi, bch_universal, bch_via_universal
from liemean.liealg import LieSeries, ad_monomial, dynkin_project, generators, to_associative
from liemean.verify import BCH_AD_TERMS, bch_from_ad_terms, random_series

from conftest import lie_series


def letter(i, n=2, d=3):
    return AssocSeries.letter(i, n, d)


def test_assoc_mul_examples():
    one = AssocSeries.one(2, 3)
    assert assoc_mul(letter(1), letter(2)) == AssocSeries.word((1, 2), 2, 3)
    got = assoc_mul(one + letter(1), one + letter(2))
    assert got == one + letter(1) + letter(2) + AssocSeries.word((1, 2), 2, 3)


def test_assoc_mul_associative():
    rng = random.Random(3)
    words = [(), (1,), (2,), (1, 2), (2, 1), (1, 1, 2), (2, 2)]

    def rand():
        return AssocSeries(2, 5, {w: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for w in rng.sample(words, 4)})

    for _ in range(10):
        p, q, r = rand(), rand(), rand()
        assert assoc_mul(assoc_mul(p, q), r) == assoc_mul(p, assoc_mul(q, r))


def test_exp_examples():
    assert assoc_exp(AssocSeries(2, 3, {})) == AssocSeries.one(2, 3)
    expected = AssocSeries(1, 3, {(): 1, (1,): 1, (1, 1): Fraction(1, 2), (1, 1, 1): Fraction(1, 6)})
    assert assoc_exp(AssocSeries.letter(1, 1, 3)) == expected


def test_log_inverts_exp():
    p = letter(1, d=5) + letter(2, d=5)
    assert assoc_log(assoc_exp(p)) == p


def test_exp_log_preconditions():
    with pytest.raises(ValueError):
        assoc_exp(AssocSeries.one(2, 3))
    with pytest.raises(ValueError):
        assoc_log(letter(1))


def _degree_part(series, d):
    return series.degree_part(d)


def test_universal_low_degrees():
    b = bch_universal(3)
    x, y = generators(2, 3)
    assert _degree_part(b, 1) == x + y
    assert _degree_part(b, 2) == LieSeries(2, 3, {(1, 2): Fraction(1, 2)})
    third = (ad_monomial([1, 1], 2, 2, 3) + ad_monomial([2, 2], 1, 2, 3)) * Fraction(1, 12)
    assert _degree_part(b, 3) == third


def test_universal_matches_ad_notation_through_degree_five():
    assert bch_universal(5) == bch_from_ad_terms(5)
    # every listed coefficient appears with its exact value
    coeffs = {c for c, _, _ in BCH_AD_TERMS}
    assert coeffs == {Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(-1, 24),
                      Fraction(-1, 720), Fraction(1, 120), Fraction(1, 360)}


@pytest.mark.parametrize("d", range(1, 8))
def test_universal_parts_are_lie_elements(d):
    part = bch_universal(7).degree_part(d)
    assert dynkin_project(to_associative(part)) == part


def test_universal_exponentiates_correctly():
    d = 6
    b = bch_universal(d)
    lhs = assoc_exp(to_associative(b))
    rhs = assoc_mul(assoc_exp(letter(1, d=d)), assoc_exp(letter(2, d=d)))
    assert lhs == rhs


def test_universal_rejects_zero_degree():
    with pytest.raises(ValueError):
        bch_universal(0)


def test_compose_with_zero_and_inverse():
    x1, x2 = generators(2, 4)
    a = x1 + x2.bracket(x1)
    assert bch_compose(a, LieSeries.zero(2, 4)) == a
    assert bch_compose(x1, -x1).is_zero()


def test_associativity_three_generators():
    x1, x2, x3 = generators(3, 5)
    assert bch_compose(bch_compose(x1, x2), x3) == bch_compose(x1, bch_compose(x2, x3))


@given(lie_series(n=2, max_degree=4), lie_series(n=2, max_degree=4), lie_series(n=2, max_degree=4))
def test_associativity_random(a, b, c):
    assert bch_compose(bch_compose(a, b), c) == bch_compose(a, bch_compose(b, c))


def test_compose_agrees_with_universal_substitution():
    x1, x2, x3 = generators(3, 5)
    a, b = x1 + x3, x2.bracket(x3) + x2
    assert bch_compose(a, b) == bch_via_universal(a, b)


def test_multi_examples():
    x1, x2, x3 = generators(3, 5)
    assert bch_multi([x1]) == x1
    assert bch_multi([-x1, -x2, -x3]) == -bch_multi([x3, x2, x1])
    assert bch_multi([x1, x2, -x1]) == ad_exp(x1, x2)
    with pytest.raises(ValueError):
        bch_multi([])


def test_multi_fold_order_irrelevant():
    x1, x2, x3 = generators(3, 4)
    left = bch_multi([x1, x2, x3])
    assert left == bch_compose(x1, bch_compose(x2, x3))


def test_ad_exp_examples():
    x1, x2 = generators(2, 4)
    assert ad_exp(LieSeries.zero(2, 4), x2) == x2
    assert ad_exp(x1, x1) == x1


def test_adjoint_equivariance_random():
    rng = random.Random(11)
    for _ in range(3):
        e, x, y = (random_series(rng, 3, 4) for _ in range(3))
        assert bch_compose(ad_exp(e, x), ad_exp(e, y)) == ad_exp(e, bch_compose(x, y))


def test_universal_degree_ten_runs():
    b = bch_universal(10)
    assert b.coefficient((1, 2)) == Fraction(1, 2)


def _evaluate(series, mats):
    from liemean.lyndon import standard_factorization

    memo = {}

    def value(w):
        if w not in memo:
            if len(w) == 1:
                memo[w] = mats[w[0] - 1]
            else:
                u, v = standard_factorization(w)
                a, b = value(u), value(v)
                memo[w] = a @ b - b @ a
        return memo[w]

    return sum(float(c) * value(w) for w, c in series.terms.items())


@pytest.mark.parametrize("seed", range(4))
def test_universal_against_matrix_logarithm(seed):
    np = pytest.importorskip("numpy")
    linalg = pytest.importorskip("scipy.linalg")
    rng = np.random.default_rng(seed)
    x, y = (0.08 * rng.standard_normal((4, 4)) for _ in range(2))
    exact = linalg.logm(linalg.expm(x) @ linalg.expm(y))
    # the degree-d tail is O(0.3^d) here: each raise of the cap must shrink the gap
    gaps = [np.abs(_evaluate(bch_universal(d), [x, y]) - exact).max() for d in (2, 4, 6, 8)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-7
