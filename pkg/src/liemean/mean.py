"""Universal averages ``mu_n`` in the free Lie algebra.

``mu_2(x, y) = BCH(x, BCH(-x, y) / 2)`` is closed form. For ``n >= 3`` the
average is the fixed point of the substitution operator ``T_n`` sending each
generator to the ``(n-1)``-ary average of the others, normalized so that its
bracket-free part is the arithmetic mean. The fixed point is found grade by
grade: substitution never lowers the bracket count, so the grade-``r`` part
solves ``(I - B_r) m_r = rhs_r`` where ``B_r`` is the bracket-preserving part
of ``T_n`` on grade ``r`` and ``rhs_r`` collects what lower grades feed in.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import os
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .bch import bch_compose
from .liealg import LieSeries, generators, substitute, symmetrize
from .linalg import Echelon, SingularMatrixError, identity_minus, intersection_dimension, solve_exact
from .lyndon import generate_lyndon_words, lyndon_words_of_degree, witt_dimension

log = logging.getLogger(__name__)

METHODS = ("fixed_point", "power_iteration")
SOLVERS = ("auto", "dense", "eigen")
# dense Fraction elimination is cubic; above this grade size the eigenbasis route is used
DENSE_SOLVE_LIMIT = 150
DEFAULT_BASIS_CAP = 20000


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds the configured basis-size cap."""


@dataclass(frozen=True)
class MeanRequest:
    n: int
    max_degree: int
    method: str = "fixed_point"
    steps: int = 60

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.max_degree < 1:
            raise ValueError(f"max_degree must be >= 1, got {self.max_degree}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")

    def run(self) -> LieSeries:
        return mu_n(self.n, self.max_degree, method=self.method, steps=self.steps)


@dataclass
class GradeSolve:
    grade: int
    dimension: int
    solver: str
    rhs_terms: int
    seconds: float


@dataclass
class SolveReport:
    n: int
    max_degree: int
    grades: list[GradeSolve] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.max_degree,
            "seconds": self.seconds,
            "grades": [g.__dict__ for g in self.grades],
        }


# -- mu_2 ----------------------------------------------------------------------


def mu2(a: LieSeries, b: LieSeries) -> LieSeries:
    """Symmetric two-point average ``BCH(a, BCH(-a, b) / 2)``."""
    half = bch_compose(-a, b) * Fraction(1, 2)
    return bch_compose(a, half)


@lru_cache(maxsize=None)
def _mu2_universal(max_degree: int) -> LieSeries:
    x, y = generators(2, max_degree)
    return mu2(x, y)


# -- the substitution operator ------------------------------------------------------


def _drop_one(n: int, i: int, max_degree: int) -> list[LieSeries]:
    return [LieSeries.generator(j, n, max_degree) for j in range(1, n + 1) if j != i]


@lru_cache(maxsize=None)
def tn_images(n: int, max_degree: int) -> tuple[LieSeries, ...]:
    """Images ``x_i -> mu_{n-1}(x_1, .., x_i omitted, .., x_n)``."""
    if n < 3:
        raise ValueError(f"T_n needs n >= 3, got {n}")
    inner = mu_universal(n - 1, max_degree)
    return tuple(substitute(inner, _drop_one(n, i, max_degree)) for i in range(1, n + 1))


def tn_apply(a: LieSeries, max_degree: int | None = None) -> LieSeries:
    """Apply ``T_n`` to an element of ``L[x_1..x_n]``."""
    if a.n < 3:
        raise ValueError(f"T_n needs n >= 3, got {a.n}")
    d = a.max_degree if max_degree is None else min(max_degree, a.max_degree)
    return substitute(a, tn_images(a.n, d), max_degree=d)


def _linear_images(n: int, max_degree: int) -> list[LieSeries]:
    # x_i -> sum_{j != i} x_j with integer coefficients; the 1/(n-1) comes later
    return [
        LieSeries(n, max_degree, {(j,): 1 for j in range(1, n + 1) if j != i}, _trusted=True)
        for i in range(1, n + 1)
    ]


def linear_block_integer(n: int, r: int) -> tuple[list, list[list[int]]]:
    """Basis and integer matrix ``M`` with ``linear_block(n, r) = M / (n-1)**(r+1)``."""
    if n < 2 or r < 0:
        raise ValueError(f"need n >= 2 and r >= 0, got n={n}, r={r}")
    d = r + 1
    basis = lyndon_words_of_degree(n, d)
    index = {w: k for k, w in enumerate(basis)}
    images = _linear_images(n, d)
    mat = [[0] * len(basis) for _ in basis]
    for col, w in enumerate(basis):
        img = substitute(LieSeries(n, d, {w: 1}, _trusted=True), images)
        for v, c in img.terms.items():
            mat[index[v]][col] = c
    return basis, mat


def linear_block(n: int, r: int) -> list[list[Fraction]]:
    """Matrix of ``x_i -> (1/(n-1)) sum_{j != i} x_j`` on the degree-``r+1`` Lyndon basis.

    Columns are images of basis words, so the matrix acts on coefficient
    column vectors.
    """
    _, mat = linear_block_integer(n, r)
    scale = Fraction(1, (n - 1) ** (r + 1))
    return [[c * scale for c in row] for row in mat]


def predicted_spectrum(n: int, r: int) -> dict[Fraction, int]:
    """Eigenvalue multiplicities of ``linear_block(n, r)``.

    In generators ``y_1 = sum x_i``, ``y_i = x_{i-1} - x_i`` the block is
    diagonal: a Lyndon word in the ``y`` letters with ``s`` letters other than
    ``y_1`` is scaled by ``(-1/(n-1))**s``.
    """
    lam = Fraction(-1, n - 1)
    spectrum: dict[Fraction, int] = {}
    for w in lyndon_words_of_degree(n, r + 1):
        ev = lam ** sum(1 for x in w if x != 1)
        spectrum[ev] = spectrum.get(ev, 0) + 1
    return spectrum


@lru_cache(maxsize=None)
def _change_of_generators(n: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    # rows of p give y_j in terms of x; rows of q give x_i in terms of y
    p = [[Fraction(1)] * n]
    for j in range(2, n + 1):
        row = [Fraction(0)] * n
        row[j - 2], row[j - 1] = Fraction(1), Fraction(-1)
        p.append(row)
    q_cols = [solve_exact(p, [1 if k == i else 0 for k in range(n)]) for i in range(n)]
    q = [[q_cols[j][i] for j in range(n)] for i in range(n)]
    return p, q


def _linear_series(rows: Sequence[Sequence[Fraction]], n: int, max_degree: int) -> list[LieSeries]:
    return [
        LieSeries(n, max_degree, {(k + 1,): c for k, c in enumerate(row) if c}, _trusted=True) for row in rows
    ]


def _solve_grade_eigen(rhs: LieSeries, n: int, r: int) -> LieSeries:
    d = r + 1
    p, q = _change_of_generators(n)
    in_y = substitute(rhs, _linear_series(q, n, d), max_degree=d)
    lam = Fraction(-1, n - 1)
    scaled = {}
    for w, c in in_y.terms.items():
        factor = 1 - lam ** sum(1 for x in w if x != 1)
        if factor == 0:
            raise SingularMatrixError(f"I - B is singular on grade {r} for n={n} (word {w})")
        scaled[w] = c / factor
    return substitute(LieSeries(n, d, scaled, _trusted=True), _linear_series(p, n, d), max_degree=d)


def _solve_grade_dense(rhs: LieSeries, n: int, r: int) -> LieSeries:
    basis = lyndon_words_of_degree(n, r + 1)
    a = identity_minus(linear_block(n, r))
    b = [rhs.coefficient(w) for w in basis]
    try:
        x = solve_exact(a, b)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"I - B is singular on grade {r} for n={n}: {exc}") from exc
    return LieSeries(n, r + 1, {w: c for w, c in zip(basis, x) if c}, _trusted=True)


def solve_mu_n(n: int, max_degree: int, solver: str = "auto") -> tuple[LieSeries, SolveReport]:
    """Grade-by-grade exact fixed point of ``T_n`` with bracket-free part the mean."""
    if n < 3:
        raise ValueError("solve_mu_n handles n >= 3; use mu2 for n = 2")
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    t0 = time.perf_counter()
    report = SolveReport(n, max_degree)
    mu = LieSeries(n, max_degree, {(i,): Fraction(1, n) for i in range(1, n + 1)}, _trusted=True)
    images = tn_images(n, max_degree)
    for r in range(1, max_degree):
        t1 = time.perf_counter()
        d = r + 1
        fed = substitute(mu, images, max_degree=d).degree_part(d)
        dim = witt_dimension(n, d)
        kind = solver if solver != "auto" else ("dense" if dim <= DENSE_SOLVE_LIMIT else "eigen")
        if fed.is_zero():
            part = fed  # I - B is invertible, so zero feeds give zero
        elif kind == "dense":
            part = _solve_grade_dense(fed, n, r)
        else:
            part = _solve_grade_eigen(fed, n, r)
        mu = mu + part.with_max_degree(max_degree)
        report.grades.append(GradeSolve(r, dim, kind, len(fed.terms), time.perf_counter() - t1))
        log.debug("mu_%d grade %d: dim %d via %s", n, r, dim, kind)
    report.seconds = time.perf_counter() - t0
    return mu, report


# -- cached universal averages -----------------------------------------------------

_cache: dict[int, LieSeries] = {}
_cache_lock = threading.Lock()
_disk_cache_dir: Path | None = None


def set_cache_dir(path: str | os.PathLike | None) -> None:
    """Persist ``mu_n`` series as JSON under ``path`` (``None`` disables)."""
    global _disk_cache_dir
    _disk_cache_dir = Path(path) if path else None
    if _disk_cache_dir:
        _disk_cache_dir.mkdir(parents=True, exist_ok=True)


def _disk_path(n: int, max_degree: int) -> Path:
    key = f"liemean/mu/v1/n={n}/degree={max_degree}".encode()
    return _disk_cache_dir / f"mu-{hashlib.sha256(key).hexdigest()[:20]}.json"  # type: ignore[operator]


def mu_universal(n: int, max_degree: int) -> LieSeries:
    """``mu_n(x_1, .., x_n)`` in ``L[x_1..x_n]`` truncated at ``max_degree`` (cached)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return LieSeries.generator(1, 1, max_degree)
    if n == 2:
        return _mu2_universal(max_degree)
    hit = _cache.get(n)
    if hit is not None and hit.max_degree >= max_degree:
        return hit.truncate(max_degree)
    if _disk_cache_dir is not None:
        path = _disk_path(n, max_degree)
        if path.exists():
            try:
                series = LieSeries.from_json(path.read_text(encoding="utf-8"))
            except (OSError, ValueError, KeyError, TypeError) as exc:
                log.warning("ignoring unreadable cache file %s: %s", path, exc)
            else:
                if series.n == n and series.max_degree == max_degree:
                    _remember(n, series)
                    return series
                log.warning("ignoring mismatched cache file %s", path)
    series, report = solve_mu_n(n, max_degree)
    log.info("solved mu_%d to degree %d in %.2fs", n, max_degree, report.seconds)
    _remember(n, series)
    if _disk_cache_dir is not None:
        _disk_path(n, max_degree).write_text(series.to_json(), encoding="utf-8")
    return series


def _remember(n: int, series: LieSeries) -> None:
    with _cache_lock:
        old = _cache.get(n)
        if old is None or old.max_degree < series.max_degree:
            _cache[n] = series


def clear_caches() -> None:
    _cache.clear()
    tn_images.cache_clear()
    _mu2_universal.cache_clear()


def mu_n(n: int, max_degree: int, method: str = "fixed_point", steps: int = 60) -> LieSeries:
    """Universal average on ``n`` generators.

    ``method="power_iteration"`` returns the first component after ``steps``
    float iterations instead of the exact fixed point.
    """
    MeanRequest(n, max_degree, method, steps)  # validation
    if method == "power_iteration" and n >= 3:
        return power_iterate(n, max_degree, steps)[0]
    return mu_universal(n, max_degree)


def evaluate_mean(args: Sequence[LieSeries], max_degree: int | None = None) -> LieSeries:
    """``mu_n(args[0], .., args[n-1])`` by substitution into the universal series."""
    if not args:
        raise ValueError("evaluate_mean needs at least one argument")
    m = args[0].n
    if any(a.n != m for a in args):
        raise ValueError("arguments must share a generator count")
    d = min(a.max_degree for a in args)
    if max_degree is not None:
        d = min(d, max_degree)
    if len(args) == 1:
        return args[0].truncate(d)
    return substitute(mu_universal(len(args), d), [a.truncate(d) for a in args])


# -- power iteration ---------------------------------------------------------


def power_iterate(n: int, max_degree: int, steps: int) -> list[LieSeries]:
    """``x_i^{k+1} = mu_{n-1}(x_j^k : j != i)`` from ``x_i^0 = x_i``, float coefficients."""
    if n < 3:
        raise ValueError(f"power iteration needs n >= 3, got {n}")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    inner = mu_universal(n - 1, max_degree).to_float()
    state = [g.to_float() for g in generators(n, max_degree)]
    for _ in range(steps):
        state = [substitute(inner, [s for j, s in enumerate(state) if j != i]) for i in range(n)]
    return state


def iteration_errors(n: int, max_degree: int, steps: int) -> list[float]:
    """Max-norm distance of the iterates to the exact ``mu_n``, for ``k = 0..steps``."""
    target = mu_universal(n, max_degree).to_float()
    inner = mu_universal(n - 1, max_degree).to_float()
    state = [g.to_float() for g in generators(n, max_degree)]
    errors = []
    for k in range(steps + 1):
        errors.append(max((s - target).max_abs() for s in state))
        if k < steps:
            state = [substitute(inner, [s for j, s in enumerate(state) if j != i]) for i in range(n)]
    return errors


# -- properties and checks -----------------------------------------------------


def extract_c(n: int) -> Fraction:
    """Coefficient ``c_n`` of ``sum_{i != j} [x_i, [x_i, x_j]]`` in ``mu_n``."""
    mu = mu_universal(n, 3)
    return mu.coefficient((1, 1, 2))


def second_order_expected(n: int, c: Fraction, max_degree: int = 3) -> LieSeries:
    """``(1/n) sum x_i + c sum_{i != j} [x_i, [x_i, x_j]]``."""
    gens = generators(n, max_degree)
    total = LieSeries.zero(n, max_degree)
    for g in gens:
        total = total + g * Fraction(1, n)
    for i, j in itertools.permutations(range(n), 2):
        total = total + gens[i].bracket(gens[i].bracket(gens[j])) * c
    return total


def conjecture_lhs(n: int, m: int, max_degree: int, basis_cap: int = DEFAULT_BASIS_CAP) -> LieSeries:
    """Outer ``C(n, m)``-ary mean of the inner ``m``-ary means over all ``m``-subsets."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    outer = math.comb(n, m)
    size = sum(witt_dimension(outer, d) for d in range(1, max_degree + 1))
    if size > basis_cap:
        raise ResourceLimitError(
            f"outer mean needs {size} basis words on {outer} generators (cap {basis_cap})"
        )
    gens = generators(n, max_degree)
    inner = [evaluate_mean([gens[s] for s in subset]) for subset in itertools.combinations(range(n), m)]
    return evaluate_mean(inner)


def _right_nested_span(seeds: Sequence[LieSeries], max_degree: int) -> list[LieSeries]:
    # span of the truncated subalgebra generated by seeds: nested brackets of <= max_degree seeds
    def order(w):
        return (len(w), w)

    found = Echelon(order)
    layer = []
    for s in seeds:
        if found.insert(s.terms):
            layer.append(s)
    span = list(layer)
    for _ in range(2, max_degree + 1):
        nxt = []
        for s in seeds:
            for b in layer:
                c = s.bracket(b)
                if not c.is_zero() and found.insert(c.terms):
                    nxt.append(c)
        if not nxt:
            break
        span.extend(nxt)
        layer = nxt
    return span


def nonuniqueness_check(n: int, max_degree: int) -> int:
    """Dimension of the symmetric part of the truncated subalgebra generated by ``BCH(x_i, -x_1)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    gens = generators(n, max_degree)
    seeds = [bch_compose(gens[i], -gens[0]) for i in range(1, n)]
    sub = _right_nested_span(seeds, max_degree)
    sym = []
    for w in generate_lyndon_words(n, max_degree):
        s = symmetrize(LieSeries(n, max_degree, {w: Fraction(1)}, _trusted=True))
        if not s.is_zero():
            sym.append(s.terms)
    return intersection_dimension([s.terms for s in sub], sym, order=lambda w: (len(w), w))


def mean_report_json(series: LieSeries, report: SolveReport | None = None) -> str:
    data = {"series": series.to_dict()}
    if report is not None:
        data["report"] = report.to_dict()
    return json.dumps(data, ensure_ascii=False)
