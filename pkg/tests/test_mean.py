import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
import sympy

from liemean import mean
from liemean.bch import bch_compose
from liemean.liealg import LieSeries, generators, permute, substitute
from liemean.linalg import nonsingular_mod_p
from liemean.mean import (
    MeanRequest,
    ResourceLimitError,
    conjecture_lhs,
    evaluate_mean,
    extract_c,
    linear_block,
    linear_block_integer,
    mu2,
    mu_n,
    mu_universal,
    nonuniqueness_check,
    power_iterate,
    predicted_spectrum,
    second_order_expected,
    solve_mu_n,
    tn_apply,
)


def test_mu2_of_equal_arguments():
    x, _ = generators(2, 5)
    assert mu2(x, x) == x


def test_mu2_third_order():
    x, y = generators(2, 3)
    expected = (x + y) * Fraction(1, 2) - (x.bracket(x.bracket(y)) + y.bracket(y.bracket(x))) * Fraction(1, 48)
    assert mu2(x, y) == expected
    assert mu_universal(2, 3).to_text() == "1/2·[1] + 1/2·[2] − 1/48·[112] − 1/48·[122]"


def test_mu2_symmetric_and_odd():
    x, y = generators(2, 6)
    assert mu2(x, y) == mu2(y, x)
    assert mu2(-x, -y) == -mu2(x, y)


def test_tn_linear_part_eigenvectors():
    n = 4
    gens = generators(n, 1)
    total = sum(gens[1:], gens[0])
    assert tn_apply(total) == total
    diff = gens[0] - gens[1]
    assert tn_apply(diff) == diff * Fraction(-1, n - 1)


def test_tn_rejects_two_generators():
    with pytest.raises(ValueError):
        tn_apply(LieSeries.generator(1, 2, 3))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_grade_zero_block(n):
    block = linear_block(n, 0)
    for i, j in itertools.product(range(n), repeat=2):
        assert block[i][j] == (0 if i == j else Fraction(1, n - 1))


@pytest.mark.parametrize("n, r", [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (5, 1)])
def test_block_spectrum_matches_prediction(n, r):
    block = sympy.Matrix(linear_block(n, r))
    lam = sympy.symbols("lam")
    charpoly = sympy.factor_list(block.charpoly(lam).as_expr())
    roots = sympy.roots(sympy.Poly(block.charpoly(lam).as_expr(), lam))
    got = {Fraction(int(sympy.numer(k)), int(sympy.denom(k))): v for k, v in roots.items()}
    assert got == predicted_spectrum(n, r), charpoly
    if r >= 1:
        assert 1 not in got


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_identity_minus_block_nonsingular(n, r):
    basis, m = linear_block_integer(n, r)
    scale = (n - 1) ** (r + 1)
    shifted = [[(scale if i == j else 0) - m[i][j] for j in range(len(basis))] for i in range(len(basis))]
    assert nonsingular_mod_p(shifted) is True


def test_mu_n_degree_one_is_average():
    gens = generators(3, 1)
    assert mu_universal(3, 1) == sum(gens[1:], gens[0]) * Fraction(1, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_second_order_formula(n):
    c = extract_c(n)
    assert c == Fraction(-1, 12 * n * n)
    assert mu_universal(n, 3) == second_order_expected(n, c)


@pytest.mark.parametrize("n, d", [(3, 5), (4, 5)])
def test_fixed_point(n, d):
    mu = mu_universal(n, d)
    assert tn_apply(mu) == mu


@pytest.mark.parametrize("n, d", [(3, 5), (4, 5)])
def test_total_symmetry(n, d):
    mu = mu_universal(n, d)
    for sigma in itertools.permutations(range(1, n + 1)):
        assert permute(mu, sigma) == mu


@pytest.mark.parametrize("n", [3, 4])
def test_odd_grades_vanish(n):
    mu = mu_universal(n, 6 if n == 3 else 5)
    for r in range(1, mu.max_degree, 2):
        assert mu.graded_component(r).is_zero()


def test_oddness_under_negation():
    n, d = 3, 5
    mu = mu_universal(n, d)
    assert substitute(mu, [-g for g in generators(n, d)]) == -mu


@pytest.mark.parametrize("n, d", [(3, 6), (4, 4)])
def test_dense_and_eigen_solvers_agree(n, d):
    a, _ = solve_mu_n(n, d, solver="dense")
    b, _ = solve_mu_n(n, d, solver="eigen")
    assert a == b


def test_solve_report_lists_grades():
    _, report = solve_mu_n(3, 4)
    assert [g.grade for g in report.grades] == [1, 2, 3]
    assert report.to_dict()["grades"][1]["dimension"] == 8


def test_power_iteration_start_and_convergence():
    gens = generators(3, 3)
    assert [s == g.to_float() for s, g in zip(power_iterate(3, 3, 0), gens)] == [True] * 3
    target = mu_universal(3, 3).to_float()
    for k in (5, 10, 20):
        state = power_iterate(3, 3, k)
        for s in state:
            assert (s - target).max_abs() <= 10 * 0.5**k


def test_power_iteration_rate():
    errs = mean.iteration_errors(3, 3, 12)
    for a, b in zip(errs[5:], errs[6:]):
        assert abs(b / a - 0.5) < 0.05


def test_mu_n_request_validation():
    with pytest.raises(ValueError):
        MeanRequest(1, 3)
    with pytest.raises(ValueError):
        MeanRequest(3, 0)
    with pytest.raises(ValueError):
        MeanRequest(3, 3, method="magic")
    assert MeanRequest(3, 3).run() == mu_universal(3, 3)
    approx = mu_n(3, 3, method="power_iteration", steps=40)
    assert (approx - mu_universal(3, 3).to_float()).max_abs() < 1e-10


def test_evaluate_mean_examples():
    x, y = generators(2, 5)
    assert evaluate_mean([x, x, x]) == x
    s1, s2 = Fraction(1, 3), Fraction(5, 2)
    assert evaluate_mean([y * s1, y * s2]) == y * ((s1 + s2) / 2)


def test_evaluate_mean_requires_common_generators():
    with pytest.raises(ValueError):
        evaluate_mean([LieSeries.generator(1, 2, 3), LieSeries.generator(1, 3, 3)])


@pytest.mark.parametrize("side", ["left", "right"])
def test_translation_equivariance(side):
    n, d = 3, 4
    gens = generators(n + 1, d)
    xs, z = gens[:n], gens[n]
    if side == "left":
        assert evaluate_mean([bch_compose(z, x) for x in xs]) == bch_compose(z, evaluate_mean(xs))
    else:
        assert evaluate_mean([bch_compose(x, z) for x in xs]) == bch_compose(evaluate_mean(xs), z)


def test_conjecture_trivial_cases():
    assert conjecture_lhs(4, 1, 4) == mu_universal(4, 4)
    assert conjecture_lhs(4, 3, 4) == mu_universal(4, 4)
    assert conjecture_lhs(3, 2, 5) == mu_universal(3, 5)


def test_conjecture_four_choose_two_low_degree():
    assert conjecture_lhs(4, 2, 3) == mu_universal(4, 3)


def test_conjecture_subset_order_is_immaterial():
    n, m, d = 4, 2, 3
    gens = generators(n, d)
    inner = [evaluate_mean([gens[s] for s in sub]) for sub in itertools.combinations(range(n), m)]
    assert evaluate_mean(inner[::-1]) == evaluate_mean(inner)


def test_conjecture_resource_guard():
    with pytest.raises(ResourceLimitError):
        conjecture_lhs(6, 3, 5, basis_cap=1000)
    with pytest.raises(ValueError):
        conjecture_lhs(3, 4, 3)


def test_nonuniqueness_dimensions():
    assert [nonuniqueness_check(2, d) for d in range(1, 5)] == [0, 0, 0, 0]
    assert [nonuniqueness_check(3, d) for d in range(1, 7)] == [0, 0, 0, 0, 1, 2]


def test_disk_cache_round_trip(tmp_path):
    mean.set_cache_dir(tmp_path)
    try:
        mean.clear_caches()
        first = mu_universal(3, 4)
        files = list(tmp_path.glob("mu-*.json"))
        assert len(files) == 1
        mean.clear_caches()
        assert mu_universal(3, 4) == first
    finally:
        mean.set_cache_dir(None)


def test_corrupt_cache_file_is_recomputed(tmp_path):
    mean.set_cache_dir(tmp_path)
    try:
        mean.clear_caches()
        good = mu_universal(3, 3)
        (path,) = tmp_path.glob("mu-*.json")
        path.write_text("{not json", encoding="utf-8")
        mean.clear_caches()
        assert mu_universal(3, 3) == good
        path.write_text(mu_universal(3, 2).to_json(), encoding="utf-8")
        mean.clear_caches()
        assert mu_universal(3, 3) == good
    finally:
        mean.set_cache_dir(None)


def test_concurrent_requests_agree():
    mean.clear_caches()
    with ThreadPoolExecutor(4) as pool:
        results = list(pool.map(lambda d: mu_universal(3, d).truncate(3), [3, 4, 5, 4]))
    assert all(r == results[0] for r in results)
