"""sl(2, R) acting on the upper half-plane.

Traceless ``e = ((a, b), (c, -a))`` moves a point ``z`` along
``dz/dt = -c z^2 + 2 a z + b``; the time-1 map is the Moebius action of
``exp(e)``. The set ``W`` holds the elements whose time-1 flow carries
``-1+i`` to ``1+i``. For ``a = 0`` it is the curve ``S (b + 2c) = 2 C`` with
``C = cosh(d)``, ``S = sinh(d)/d``, ``d^2 = bc`` (cos/sin when ``bc < 0``).

Matrices are 2x2 float ``numpy`` arrays; points are Python complex numbers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bch import bch_compose
from .liealg import LieSeries
from .lyndon import standard_factorization
from .mean import mu2, mu_universal

SOURCE = complex(-1, 1)
TARGET = complex(1, 1)
BRANCHES = ("bc_pos", "bc_neg", "limit_20", "limit_01")

FLOW_TOL = 1e-10  # local error per RK4 step
FLOW_AGREEMENT = 1e-7
W_TOL = 1e-10
MEAN_DEFECT_TOL = 1e-3
NOISE_FLOOR = 1e-9
_TRACE_TOL = 1e-12
_DET_TOL = 1e-9


class GaugeError(ArithmeticError):
    """Numeric failure: degenerate Moebius denominator, flow leaving H, undefined root."""


def mat2(a11: float, a12: float, a21: float, a22: float) -> np.ndarray:
    return np.array([[a11, a12], [a21, a22]], dtype=float)


def sl2(a: float, b: float, c: float) -> np.ndarray:
    """Traceless ``((a, b), (c, -a))``."""
    return mat2(a, b, c, -a)


def _as_mat(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return m


def _check_traceless(e: np.ndarray) -> None:
    if abs(e[0, 0] + e[1, 1]) > _TRACE_TOL * max(1.0, float(np.abs(e).max())):
        raise ValueError(f"matrix is not traceless (trace {e[0, 0] + e[1, 1]:.3g})")


def _check_uhp(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise ValueError(f"point {z} is not in the upper half-plane")
    return z


# -- group action ------------------------------------------------------------


def mobius(g, z: complex) -> complex:
    """``(a z + b) / (c z + d)`` for ``g`` with determinant 1."""
    g = _as_mat(g)
    z = _check_uhp(z)
    if abs(np.linalg.det(g) - 1) > _DET_TOL:
        raise ValueError(f"mobius needs det 1, got {np.linalg.det(g):.12g}")
    den = g[1, 0] * z + g[1, 1]
    if abs(den) < 1e-12:
        raise GaugeError("Moebius denominator vanishes")
    return (g[0, 0] * z + g[0, 1]) / den


def sl2_exp(e) -> np.ndarray:
    """``exp(e) = C I + S e`` with ``C, S`` driven by ``a^2 + bc`` (traceless ``e``)."""
    e = _as_mat(e)
    _check_traceless(e)
    d2 = e[0, 0] ** 2 + e[0, 1] * e[1, 0]
    if abs(d2) < 1e-8:
        # truncation error below d2^4/8! ~ 1e-37
        cc = 1 + d2 / 2 + d2**2 / 24 + d2**3 / 720
        ss = 1 + d2 / 6 + d2**2 / 120 + d2**3 / 5040
    elif d2 > 0:
        d = math.sqrt(d2)
        cc, ss = math.cosh(d), math.sinh(d) / d
    else:
        d = math.sqrt(-d2)
        cc, ss = math.cos(d), math.sin(d) / d
    return cc * np.eye(2) + ss * e


def expm_taylor(m, terms: int = 30) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential of any 2x2 matrix (test oracle)."""
    m = _as_mat(m)
    norm = float(np.abs(m).sum(axis=1).max())
    k = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0 else 0
    a = m / 2**k
    out = np.eye(2)
    term = np.eye(2)
    for j in range(1, terms):
        term = term @ a / j
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def velocity(e, z: complex) -> complex:
    """Vector field ``-c z^2 + 2 a z + b`` of ``e`` at ``z``."""
    e = _as_mat(e)
    return -e[1, 0] * z * z + 2 * e[0, 0] * z + e[0, 1]


def fixes_point(e, z: complex, tol: float = 1e-12) -> bool:
    return abs(velocity(e, z)) <= tol


def flow(e, z0: complex, duration: float = 1.0, tol: float = FLOW_TOL, max_steps: int = 1_000_000) -> complex:
    """Integrate ``dz/dt = -c z^2 + 2 a z + b`` over ``[0, duration]``.

    Classical RK4 with step doubling: each step is compared against two half
    steps, accepted when the difference is below ``tol`` and then
    Richardson-corrected.
    """
    e = _as_mat(e)
    _check_traceless(e)
    z = _check_uhp(z0)
    a, b, c = float(e[0, 0]), float(e[0, 1]), float(e[1, 0])
    if duration == 0 or (a == 0 and b == 0 and c == 0):
        return z

    def f(w):
        return -c * w * w + 2 * a * w + b

    def rk4(w, h):
        k1 = f(w)
        k2 = f(w + h / 2 * k1)
        k3 = f(w + h / 2 * k2)
        k4 = f(w + h * k3)
        return w + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    sign = 1.0 if duration > 0 else -1.0
    remaining = abs(duration)
    speed = abs(a) + abs(b) + abs(c)
    h = min(remaining, 0.05 / max(1.0, speed))
    h_min = 1e-14 * max(1.0, remaining)
    for _ in range(max_steps):
        if remaining <= 0:
            return z
        h = min(h, remaining)
        full = rk4(z, sign * h)
        half = rk4(rk4(z, sign * h / 2), sign * h / 2)
        err = abs(half - full) / 15
        if err <= tol:
            z = half + (half - full) / 15
            remaining -= h
            if not z.imag > 0:
                raise GaugeError(f"trajectory left the upper half-plane at {z}")
        if err == 0:
            h *= 4
        else:
            h *= min(4.0, max(0.1, 0.9 * (tol / err) ** 0.2))
        if h < h_min and remaining > h_min:
            raise GaugeError("flow step size underflow")
    raise GaugeError(f"flow did not finish in {max_steps} steps")


# -- the set W ---------------------------------------------------------------


def curve_residual(b: float, c: float) -> float:
    """``S (b + 2c) - 2 C`` with ``d^2 = bc``; zero exactly on ``W`` with ``a = 0``."""
    d2 = b * c
    if abs(d2) < 1e-8:
        cc = 1 + d2 / 2 + d2**2 / 24
        ss = 1 + d2 / 6 + d2**2 / 120
    elif d2 > 0:
        d = math.sqrt(d2)
        cc, ss = math.cosh(d), math.sinh(d) / d
    else:
        d = math.sqrt(-d2)
        cc, ss = math.cos(d), math.sin(d) / d
    return ss * (b + 2 * c) - 2 * cc


@dataclass(frozen=True)
class WElement:
    branch: str
    t: float
    b: float
    c: float

    @property
    def matrix(self) -> np.ndarray:
        return sl2(0.0, self.b, self.c)

    def to_dict(self) -> dict:
        return {"branch": self.branch, "t": self.t, "b": self.b, "c": self.c}


BC_POS_LIMIT = math.asinh(1.0)  # sinh|t| < 1


def w_element(branch: str, t: float = 0.0) -> WElement:
    """Point of ``W`` on the given branch; ``t`` is ignored for the two limits."""
    if branch == "limit_20":
        return WElement(branch, 0.0, 2.0, 0.0)
    if branch == "limit_01":
        return WElement(branch, 0.0, 0.0, 1.0)
    t = float(t)
    # (lead + root)(lead - root) = product; the factor without cancellation is formed directly
    if branch == "bc_pos":
        if not 0 < abs(t) < BC_POS_LIMIT:
            raise ValueError(f"bc_pos needs 0 < sinh|t| < 1, got t={t}")
        lead, root, product = 1 / math.tanh(t), math.sqrt(1 / math.sinh(t) ** 2 - 1), 2.0
    elif branch == "bc_neg":
        if t == 0 or abs(math.sin(t)) < 1e-12:
            raise ValueError(f"bc_neg needs t outside pi*Z, got t={t}")
        lead, root, product = 1 / math.tan(t), math.sqrt(1 / math.sin(t) ** 2 + 1), -2.0
    else:
        raise ValueError(f"unknown branch {branch!r}; expected one of {BRANCHES}")
    if lead >= 0:
        plus = lead + root
        minus = product / plus
    else:
        minus = lead - root
        plus = product / minus
    b = t * plus
    c = 0.5 * t * minus
    el = WElement(branch, t, b, c)
    if abs(curve_residual(b, c)) > W_TOL * max(1.0, abs(b), abs(c)):
        raise GaugeError(f"{branch} at t={t} missed W (residual {curve_residual(b, c):.3g})")
    return el


def curve_points(samples: int = 200) -> list[dict]:
    """Samples of both parametrized branches of ``W`` with their ``(b, 2c)`` coordinates."""
    rows = []
    eps = 1e-3
    grids = {
        "bc_pos": np.linspace(-BC_POS_LIMIT + eps, BC_POS_LIMIT - eps, samples),
        "bc_neg": np.linspace(-math.pi + eps, math.pi - eps, samples),
    }
    for branch, grid in grids.items():
        for t in grid:
            if abs(t) < eps / 2:
                continue
            el = w_element(branch, float(t))
            rows.append({
                "branch": branch,
                "t": el.t,
                "b": el.b,
                "c": el.c,
                "two_c": 2 * el.c,
                "residual": curve_residual(el.b, el.c),
            })
    return rows


def write_curve_csv(path_or_file, samples: int = 200) -> int:
    rows = curve_points(samples)
    cols = ["branch", "t", "b", "c", "two_c", "residual"]
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(path_or_file, fieldnames=cols)
        writer.writeheader()
        writer.writerows(rows)
    return len(rows)


# -- group-level mean ----------------------------------------------------------


def denman_beavers(m, tol: float = 1e-14, max_iter: int = 100) -> np.ndarray:
    """Principal square root by the Denman-Beavers iteration."""
    y = _as_mat(m).copy()
    z = np.eye(2)
    for _ in range(max_iter):
        yi, zi = np.linalg.inv(y), np.linalg.inv(z)
        y_next = 0.5 * (y + zi)
        z = 0.5 * (z + yi)
        if np.abs(y_next - y).max() <= tol * max(1.0, np.abs(y_next).max()):
            return y_next
        y = y_next
    raise GaugeError("Denman-Beavers iteration did not converge")


def sqrtm2(m) -> np.ndarray:
    """Principal square root of a 2x2 matrix with no eigenvalue on ``(-inf, 0]``.

    Closed form ``(M + s I) / sqrt(tr M + 2 s)`` with ``s = sqrt(det M)``.
    """
    m = _as_mat(m)
    scale = max(1.0, float(np.abs(m).max()))
    for lam in np.linalg.eigvals(m):
        if abs(lam.imag) <= 1e-12 * scale and lam.real <= 1e-12 * scale:
            raise GaugeError(f"no principal square root: eigenvalue {lam.real:.6g} on the closed negative axis")
    det = float(np.linalg.det(m))
    s = math.sqrt(det)
    denom = float(np.trace(m)) + 2 * s
    if denom < 1e-8 * scale:
        return denman_beavers(m)
    return (m + s * np.eye(2)) / math.sqrt(denom)


def group_mean2(g, h) -> np.ndarray:
    """``k = g sqrt(g^-1 h)``; equals ``h sqrt(h^-1 g)``."""
    g, h = _as_mat(g), _as_mat(h)
    for name, x in (("g", g), ("h", h)):
        if abs(np.linalg.det(x) - 1) > _DET_TOL:
            raise ValueError(f"{name} must have determinant 1")
    return g @ sqrtm2(np.linalg.solve(g, h))


# -- numeric realization of Lie series -----------------------------------------


def evaluate_series(a: LieSeries, assignment: Sequence) -> np.ndarray:
    """Substitute traceless matrices for the generators, brackets as commutators."""
    mats = [_as_mat(m) for m in assignment]
    if len(mats) != a.n:
        raise ValueError(f"series has {a.n} generators, got {len(mats)} matrices")
    for m in mats:
        _check_traceless(m)
    memo: dict = {}

    def value(w):
        hit = memo.get(w)
        if hit is None:
            if len(w) == 1:
                hit = mats[w[0] - 1]
            else:
                u, v = standard_factorization(w)
                x, y = value(u), value(v)
                hit = x @ y - y @ x
            memo[w] = hit
        return hit

    out = np.zeros((2, 2))
    for w, c in a.terms.items():
        out = out + float(c) * value(w)
    return out


# -- mean flow check -------------------------------------------------------------


@dataclass
class DegreeRow:
    degree: int
    a: float
    b: float
    c: float
    flow_defect: float
    exp_defect: float
    curve_residual: float


@dataclass
class MeanFlowReport:
    inputs: list[dict]
    rows: list[DegreeRow] = field(default_factory=list)
    input_defects: list[float] = field(default_factory=list)
    asserted: bool = True

    @property
    def defects(self) -> list[float]:
        return [r.flow_defect for r in self.rows]

    @property
    def decreasing(self) -> bool:
        d = self.defects
        return all(x > y for x, y in zip(d, d[1:]))

    @property
    def passed(self) -> bool | None:
        """``None`` for trend-only reports."""
        if not self.asserted:
            return None
        if not self.rows:
            return False
        # identical inputs give defects at integrator noise, which need not decrease
        settled = max(self.defects) < NOISE_FLOOR
        return (self.decreasing or settled) and self.defects[-1] < MEAN_DEFECT_TOL

    def to_dict(self) -> dict:
        return {
            "inputs": self.inputs,
            "input_defects": self.input_defects,
            "rows": [r.__dict__ for r in self.rows],
            "checks": {
                "asserted": self.asserted,
                "decreasing": self.decreasing,
                "final_below_tolerance": bool(self.rows) and self.defects[-1] < MEAN_DEFECT_TOL,
                "passed": self.passed,
            },
            "tolerance": MEAN_DEFECT_TOL,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        lines = [f"{'D':>3} {'a':>12} {'b':>12} {'c':>12} {'flow defect':>13} {'exp defect':>13} {'curve res':>12}"]
        for r in self.rows:
            lines.append(
                f"{r.degree:>3} {r.a:>12.3e} {r.b:>12.6f} {r.c:>12.6f} "
                f"{r.flow_defect:>13.3e} {r.exp_defect:>13.3e} {r.curve_residual:>12.3e}"
            )
        return "\n".join(lines)


def _describe(el) -> dict:
    if isinstance(el, WElement):
        return el.to_dict()
    m = _as_mat(el)
    return {"a": float(m[0, 0]), "b": float(m[0, 1]), "c": float(m[1, 0])}


def mean_flow_check(
    elements: Sequence,
    degrees: Iterable[int] = (2, 4, 6, 8),
    source: complex = SOURCE,
    target: complex = TARGET,
    asserted: bool = True,
) -> MeanFlowReport:
    """Flow the truncated universal mean of ``elements`` and measure how far it lands from ``target``."""
    mats = [el.matrix if isinstance(el, WElement) else _as_mat(el) for el in elements]
    if len(mats) < 2:
        raise ValueError("mean_flow_check needs at least two elements")
    report = MeanFlowReport([_describe(el) for el in elements], asserted=asserted)
    for m in mats:
        d = abs(flow(m, source, 1.0) - target)
        report.input_defects.append(d)
        if d > FLOW_AGREEMENT:
            raise ValueError(f"input element does not carry {source} to {target} (defect {d:.3g})")
    for deg in degrees:
        m = evaluate_series(mu_universal(len(mats), deg), mats)
        report.rows.append(DegreeRow(
            degree=deg,
            a=float(m[0, 0]),
            b=float(m[0, 1]),
            c=float(m[1, 0]),
            flow_defect=abs(flow(m, source, 1.0) - target),
            exp_defect=abs(mobius(sl2_exp(m), source) - target),
            curve_residual=curve_residual(float(m[0, 1]), float(m[1, 0])),
        ))
    return report


def s_family_identity(s1, s2, max_degree: int = 5) -> bool:
    """``mu2(BCH(z, s1 y), BCH(z, s2 y)) == BCH(z, (s1 + s2)/2 y)`` exactly in ``L[z, y]``."""
    z = LieSeries.generator(1, 2, max_degree)
    y = LieSeries.generator(2, 2, max_degree)
    s1, s2 = Fraction(s1), Fraction(s2)
    lhs = mu2(bch_compose(z, y * s1), bch_compose(z, y * s2))
    return lhs == bch_compose(z, y * ((s1 + s2) / 2))


def csv_text(samples: int = 200) -> str:
    buf = io.StringIO()
    write_curve_csv(buf, samples)
    return buf.getvalue()
