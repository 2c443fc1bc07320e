"""Executable checks for the extreme-point estimates and comparison theorems.

Every check returns a :class:`PropertyReport`. Violations are signed: a
negative ``worst_violation`` means the inequality holds with room to spare,
and ``passed`` is exactly ``worst_violation <= tolerance_used``. Tolerances
are ``c * h`` with a per-property constant (see ``TOLERANCE_CONSTANTS``).
Strict conclusions use ``tolerance_used = -margin``: the inequality has to
clear a margin of ``c * h``.

Checks raise PreconditionUnmet when the sampled hypotheses fail, so that
misuse is reported instead of a meaningless pass.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import HypothesisViolation, PreconditionUnmet
from .operators import (
    DifferentiableInput,
    Normalization,
    Trajectory,
    UniformGrid,
    abc_derivative,
    as_alpha,
    ml_growth_derivative,
    prabhakar_input,
)
from .solver import IVProblem, RhsFunction, SolverConfig, solve_extremal, solve_ivp
from .special_functions import MLParams, ml1, ml3, pochhammer

__all__ = [
    "PropertyReport",
    "StrictSide",
    "ComparisonPair",
    "TOLERANCE_CONSTANTS",
    "check_zero_crossing_max",
    "check_zero_crossing_min",
    "check_max_point_estimate",
    "check_min_point_estimate",
    "check_strict_comparison",
    "check_nonstrict_comparison",
    "check_ml_growth_bound",
    "check_prabhakar_growth_inequality",
    "check_ml_self_growth",
    "check_periodic_comparison",
    "check_maximal_domination",
    "prabhakar_lemma_discrepancy",
    "run_suite",
    "reports_to_json",
    "suite_passed",
]

TOLERANCE_CONSTANTS = {
    "zero_crossing": 1.0,
    "extreme_point": 1.0,
    "comparison": 1.0,
    "strict_margin": 0.01,
    "growth_bound": 1.0,
    "periodic": 1.0,
    "domination": 1.0,
    "lemma": 1.0,
}


@dataclass(frozen=True)
class PropertyReport:
    property_name: str
    passed: bool
    worst_violation: float
    violation_location: float
    tolerance_used: float
    notes: str = ""
    experimental: bool = False

    def __post_init__(self) -> None:
        if self.passed != (self.worst_violation <= self.tolerance_used):
            raise ValueError("passed must equal worst_violation <= tolerance_used")

    @classmethod
    def from_violations(
        cls,
        name: str,
        violations: np.ndarray,
        taus: np.ndarray,
        tol: float,
        notes: str = "",
        experimental: bool = False,
        kind: str | None = None,
    ) -> "PropertyReport":
        """Report the largest entry of ``violations``; ties go to the smallest tau.

        ``kind`` names the entry of TOLERANCE_CONSTANTS behind ``tol``; it is
        appended to the notes.
        """
        if kind is not None:
            const = f"tol = {TOLERANCE_CONSTANTS[kind]:g}*h"
            notes = f"{notes}; {const}" if notes else const
        k = int(np.argmax(violations))
        worst = float(violations[k]) + 0.0  # no -0.0 in reports
        return cls(name, worst <= tol, worst, float(taus[k]), float(tol), notes, experimental)

    def to_dict(self) -> dict:
        notes = f"[EXPERIMENTAL] {self.notes}" if self.experimental else self.notes
        return {
            "property_name": self.property_name,
            "passed": bool(self.passed),
            "worst_violation": self.worst_violation,
            "violation_location": self.violation_location,
            "tolerance_used": self.tolerance_used,
            "notes": notes,
        }


def reports_to_json(reports: Iterable[PropertyReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


class StrictSide(enum.Enum):
    LOWER_STRICT = "lower"
    UPPER_STRICT = "upper"
    NONE = "none"


@dataclass(frozen=True)
class ComparisonPair:
    """Candidate lower solution ``v`` and upper solution ``w`` of ``D u = f(tau, u)``.

    ``strict_side = NONE`` means: accept whichever side turns out strict.
    """

    lower_v: DifferentiableInput
    upper_w: DifferentiableInput
    rhs_f: Callable[[float, float], float]
    strict_side: StrictSide = StrictSide.NONE


def _tol(kind: str, grid: UniformGrid) -> float:
    return TOLERANCE_CONSTANTS[kind] * grid.step_h


def _sample(m: DifferentiableInput | Trajectory, alpha: float, B: Normalization, grid: UniformGrid):
    if isinstance(m, Trajectory):
        grid = m.grid
        vals = np.array(m.values)
    else:
        vals, _ = m.sample(grid)
    return vals, abc_derivative(m, alpha, B, grid).values


def _eval_rhs(f: Callable[[float, float], float], taus: np.ndarray, vals: np.ndarray) -> np.ndarray:
    return np.array([f(float(t), float(v)) for t, v in zip(taus, vals)])


def _crossing_index(tau0: float, grid: UniformGrid) -> int:
    k0 = grid.index_of(tau0)
    if k0 == 0:
        raise PreconditionUnmet("tau0 must lie in (0, T]")
    return k0


def check_zero_crossing_max(
    m: DifferentiableInput, tau0: float, alpha: float, B: Normalization, grid: UniformGrid
) -> PropertyReport:
    """``m(tau0) = 0`` and ``m <= 0`` before ``tau0`` imply ``D m(tau0) >= 0``."""
    a = as_alpha(alpha)
    tol = _tol("zero_crossing", grid)
    k0 = _crossing_index(tau0, grid)
    vals, D = _sample(m, a, B, grid)
    if abs(vals[k0]) > tol:
        raise PreconditionUnmet(f"m(tau0) = {vals[k0]:.3g} is not zero")
    if np.max(vals[:k0]) > tol:
        raise PreconditionUnmet(f"m rises to {np.max(vals[:k0]):.3g} > 0 before tau0")
    return PropertyReport.from_violations(
        "zero_crossing_max", np.array([-D[k0]]), np.array([grid.nodes[k0]]), tol, f"D m(tau0) = {D[k0]:.6g}", kind="zero_crossing"
    )


def check_zero_crossing_min(
    m: DifferentiableInput, tau0: float, alpha: float, B: Normalization, grid: UniformGrid
) -> PropertyReport:
    """``m(tau0) = 0`` and ``m >= 0`` before ``tau0`` imply ``D m(tau0) <= 0``."""
    a = as_alpha(alpha)
    tol = _tol("zero_crossing", grid)
    k0 = _crossing_index(tau0, grid)
    vals, D = _sample(m, a, B, grid)
    if abs(vals[k0]) > tol:
        raise PreconditionUnmet(f"m(tau0) = {vals[k0]:.3g} is not zero")
    if np.min(vals[:k0]) < -tol:
        raise PreconditionUnmet(f"m drops to {np.min(vals[:k0]):.3g} < 0 before tau0")
    return PropertyReport.from_violations(
        "zero_crossing_min", np.array([D[k0]]), np.array([grid.nodes[k0]]), tol, f"D m(tau0) = {D[k0]:.6g}", kind="zero_crossing"
    )


def _extreme_point(f, alpha, B, grid, tau0, sign: float, name: str) -> PropertyReport:
    a = as_alpha(alpha)
    tol = _tol("extreme_point", grid)
    vals, D = _sample(f, a, B, grid)
    signed = sign * vals
    k_best = int(np.argmax(signed))
    if tau0 is None:
        k0 = k_best
    else:
        k0 = grid.index_of(tau0)
        if signed[k0] < signed[k_best] - tol:
            raise PreconditionUnmet(f"tau0={tau0:g} is not a {'maximizer' if sign > 0 else 'minimizer'}")
    return PropertyReport.from_violations(
        name, np.array([-sign * D[k0]]), np.array([grid.nodes[k0]]), tol, f"D f(tau0) = {D[k0]:.6g}", kind="extreme_point"
    )


def check_max_point_estimate(
    f: DifferentiableInput, alpha: float, B: Normalization, grid: UniformGrid, tau0: float | None = None
) -> PropertyReport:
    """``D f >= 0`` at a maximizer; the discrete argmax is used unless ``tau0`` is given."""
    return _extreme_point(f, alpha, B, grid, tau0, 1.0, "max_point_estimate")


def check_min_point_estimate(
    f: DifferentiableInput, alpha: float, B: Normalization, grid: UniformGrid, tau0: float | None = None
) -> PropertyReport:
    """``D f <= 0`` at a minimizer."""
    return _extreme_point(f, alpha, B, grid, tau0, -1.0, "min_point_estimate")


def _pair_samples(pair: ComparisonPair, a: float, B: Normalization, grid: UniformGrid):
    v, Dv = _sample(pair.lower_v, a, B, grid)
    w, Dw = _sample(pair.upper_w, a, B, grid)
    taus = grid.nodes
    # positive entries mean the hypothesis is violated there
    gap_lower = Dv - _eval_rhs(pair.rhs_f, taus, v)
    gap_upper = _eval_rhs(pair.rhs_f, taus, w) - Dw
    return v, w, gap_lower, gap_upper


def check_strict_comparison(
    pair: ComparisonPair, alpha: float, B: Normalization, grid: UniformGrid
) -> PropertyReport:
    """Lower/upper solutions with one strict inequality and ``v(0) < w(0)`` stay strictly ordered."""
    a = as_alpha(alpha)
    tol = _tol("comparison", grid)
    margin = _tol("strict_margin", grid)
    v, w, gl, gu = _pair_samples(pair, a, B, grid)
    if not v[0] < w[0]:
        raise PreconditionUnmet(f"need v(0) < w(0); got {v[0]:.6g} >= {w[0]:.6g}")
    if np.max(gl) > tol:
        raise PreconditionUnmet(f"D v <= f(tau, v) fails by {np.max(gl):.3g}")
    if np.max(gu) > tol:
        raise PreconditionUnmet(f"D w >= f(tau, w) fails by {np.max(gu):.3g}")
    lower_strict = np.max(gl) <= -margin
    upper_strict = np.max(gu) <= -margin
    side = pair.strict_side
    if (side is StrictSide.LOWER_STRICT and not lower_strict) or (
        side is StrictSide.UPPER_STRICT and not upper_strict
    ):
        raise PreconditionUnmet(f"the {side.value} inequality is not strict by margin {margin:g}")
    if side is StrictSide.NONE and not (lower_strict or upper_strict):
        raise PreconditionUnmet(f"neither inequality is strict by margin {margin:g}")
    strict = "lower" if lower_strict else "upper"
    return PropertyReport.from_violations(
        "strict_comparison", v - w, grid.nodes, -margin, f"strict side: {strict}; requires w - v >= {margin:g}", kind="strict_margin"
    )


def _one_sided_lipschitz_excess(f, L: float, taus, lo: float, hi: float, n: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(n):
        t = float(rng.choice(taus))
        x, y = sorted(rng.uniform(lo, hi, size=2))
        # one-sided condition for omega = y >= eta = x
        worst = max(worst, f(t, y) - f(t, x) - L * (y - x))
    return worst


def check_nonstrict_comparison(
    pair: ComparisonPair,
    L: float,
    alpha: float,
    B: Normalization,
    grid: UniformGrid,
    inflation_eps: Sequence[float] = (1e-2, 1e-3),
) -> PropertyReport:
    """Non-strict comparison under a one-sided Lipschitz bound ``0 < L < B/(1-a)``.

    Also rebuilds the inflated upper solution ``w + eps E_a(tau**a)`` and
    tests ``D w_eps > f(tau, w_eps)`` on ``[h, T]``; the outcome is recorded
    in ``notes`` only, because the argument that is meant to guarantee it
    does not hold in general.
    """
    a = as_alpha(alpha)
    b = B(a)
    if not 0.0 < L < b / (1.0 - a):
        raise HypothesisViolation(f"need 0 < L < B(alpha)/(1-alpha) = {b / (1 - a):.6g}, got {L}")
    tol = _tol("comparison", grid)
    v, w, gl, gu = _pair_samples(pair, a, B, grid)
    taus = grid.nodes
    lo, hi = float(min(v.min(), w.min())) - 1.0, float(max(v.max(), w.max())) + 1.0
    excess = _one_sided_lipschitz_excess(pair.rhs_f, L, taus, lo, hi)
    if excess > 1e-12 * max(1.0, abs(hi), abs(lo)):
        raise PreconditionUnmet(f"one-sided Lipschitz bound with L={L:g} fails by {excess:.3g}")
    if v[0] > w[0] + tol:
        raise PreconditionUnmet(f"need v(0) <= w(0); got {v[0]:.6g} > {w[0]:.6g}")
    if np.max(gl) > tol:
        raise PreconditionUnmet(f"D v <= f(tau, v) fails by {np.max(gl):.3g}")
    if np.max(gu) > tol:
        raise PreconditionUnmet(f"D w >= f(tau, w) fails by {np.max(gu):.3g}")

    _, Dw = _sample(pair.upper_w, a, B, grid)
    growth = np.array([ml1(a, float(t) ** a) for t in taus])
    d_growth = np.array([ml_growth_derivative(a, B, float(t)) for t in taus])
    pieces = []
    for eps in inflation_eps:
        w_eps = w + eps * growth
        slack = Dw + eps * d_growth - _eval_rhs(pair.rhs_f, taus, w_eps)
        k = 1 + int(np.argmin(slack[1:]))
        verdict = "holds" if slack[k] > 0 else "FAILS"
        pieces.append(f"inflation eps={eps:g}: min(D w_eps - f) on [h,T] = {slack[k]:.4g} at tau={taus[k]:.4g} ({verdict})")
    return PropertyReport.from_violations("nonstrict_comparison", v - w, taus, tol, "; ".join(pieces), kind="comparison")


def check_ml_growth_bound(
    m: Trajectory,
    m0: float,
    alpha: float,
    *,
    abc_values: np.ndarray | None = None,
    B: Normalization = Normalization(),
) -> PropertyReport:
    """Growth bound ``m <= m0 E_a(tau**a)`` for ``D m <= B/(1-a) m``, ``m(0) = m0``.

    Supplying ``abc_values`` (samples of ``D m``) makes the hypothesis part
    of the check. The bound is not a theorem: strict subsolutions such as
    ``exp(5 tau)`` exceed it, so a failing report is a legitimate outcome.
    """
    a = as_alpha(alpha)
    grid = m.grid
    tol = _tol("growth_bound", grid)
    vals = np.array(m.values)
    if abs(vals[0] - m0) > tol:
        raise PreconditionUnmet(f"m(0) = {vals[0]:.6g} differs from m0 = {m0:.6g}")
    notes = "hypothesis not re-verified"
    if abc_values is not None:
        gap = np.asarray(abc_values) - B(a) / (1.0 - a) * vals
        if np.max(gap) > tol:
            raise PreconditionUnmet(f"D m <= B/(1-a) m fails by {np.max(gap):.3g}")
        notes = f"hypothesis verified, worst slack {np.max(gap):.3g}"
    bound = np.array([m0 * ml1(a, float(t) ** a) for t in grid.nodes])
    return PropertyReport.from_violations("ml_growth_bound", vals - bound, grid.nodes, tol, notes, kind="growth_bound")


def check_prabhakar_growth_inequality(
    alpha: float, grid: UniformGrid, xs: Sequence[float] | None = None, rel_tol: float = 1e-12
) -> PropertyReport:
    """``E^2_{a,1}(x) >= E_a(x)`` for ``x >= 0``, by evaluation and term by term."""
    a = as_alpha(alpha)
    points = np.array([t**a for t in grid.nodes]) if xs is None else np.asarray(xs, dtype=float)
    if np.any(points < 0):
        raise PreconditionUnmet("the inequality is only asserted for non-negative arguments")
    coef_ok = all(math.isclose(pochhammer(2.0, k) / math.factorial(k), k + 1.0) for k in range(21))
    lhs = np.array([ml3(MLParams(a, 1.0, 2.0), float(x)) for x in points])
    rhs = np.array([ml1(a, float(x)) for x in points])
    viol = (rhs - lhs) / np.maximum(1.0, np.abs(rhs))
    notes = f"(2)_k/k! = k+1 for k<=20: {coef_ok}; violation is relative"
    if not coef_ok:
        viol = viol + 1.0
    return PropertyReport.from_violations("prabhakar_growth_inequality", viol, points, rel_tol, notes)


def check_ml_self_growth(alpha: float, B: Normalization, grid: UniformGrid) -> PropertyReport:
    """Claimed ``D[E_a(tau**a)] >= B/(1-a) E_a(tau**a)`` on ``[h, T]`` (experimental).

    The exact derivative is ``B (E_a(tau**a) - E_a(-c tau**a))``, which is
    always smaller than the claimed bound, so this report fails. It is kept
    to document the gap; it never gates the suite.
    """
    a = as_alpha(alpha)
    taus = grid.nodes[1:]
    lhs = np.array([ml_growth_derivative(a, B, float(t)) for t in taus])
    rhs = np.array([B(a) / (1.0 - a) * ml1(a, float(t) ** a) for t in taus])
    return PropertyReport.from_violations(
        "ml_self_growth",
        rhs - lhs,
        taus,
        _tol("lemma", grid),
        "exact D[E_a(t^a)] = B(E_a(t^a) - E_a(-c t^a)); evaluated on [h, T]",
        experimental=True,
        kind="lemma",
    )


def check_periodic_comparison(
    pair: ComparisonPair, alpha: float, B: Normalization, grid: UniformGrid, seed: int = 0
) -> PropertyReport:
    """Periodic-boundary comparison (experimental, never gates)."""
    a = as_alpha(alpha)
    tol = _tol("periodic", grid)
    v, w, gl, gu = _pair_samples(pair, a, B, grid)
    taus = grid.nodes
    if v[0] > v[-1] + tol:
        raise PreconditionUnmet("need v(0) <= v(T)")
    if w[0] < w[-1] - tol:
        raise PreconditionUnmet("need w(0) >= w(T)")
    lo, hi = float(min(v.min(), w.min())) - 1.0, float(max(v.max(), w.max())) + 1.0
    rng = np.random.default_rng(seed)
    for _ in range(100):
        t = float(rng.choice(taus))
        x, y = sorted(rng.uniform(lo, hi, size=2))
        if pair.rhs_f(t, y) > pair.rhs_f(t, x) + 1e-12:
            raise PreconditionUnmet(f"f is increasing in omega at tau={t:g}")
    if np.max(gl) > tol or np.max(gu) > tol:
        raise PreconditionUnmet("lower/upper solution inequalities fail on the grid")
    return PropertyReport.from_violations(
        "periodic_comparison", v - w, taus, tol, "reported only, never gates", experimental=True, kind="periodic"
    )


def check_maximal_domination(
    m: DifferentiableInput | Trajectory,
    g: RhsFunction,
    u0: float,
    alpha: float,
    B: Normalization,
    config: SolverConfig,
    T: float | None = None,
) -> PropertyReport:
    """``D m <= g(tau, m)`` and ``m(0) <= u0`` imply ``m <= eta`` (maximal solution)."""
    a = as_alpha(alpha)
    if isinstance(m, Trajectory):
        grid = m.grid
    else:
        if T is None:
            raise PreconditionUnmet("T is required for callable input")
        grid = UniformGrid.over(T, config.step_h)
    tol = _tol("domination", grid)
    vals, D = _sample(m, a, B, grid)
    taus = grid.nodes
    if vals[0] > u0 + 1e-12:
        raise PreconditionUnmet(f"need m(0) <= u0; got {vals[0]:.6g} > {u0:.6g}")
    gap = D - _eval_rhs(g, taus, vals)
    if np.max(gap) > tol:
        raise PreconditionUnmet(f"D m <= g(tau, m) fails by {np.max(gap):.3g}")
    problem = IVProblem(g, u0, grid.T, a, B)
    eta, _ = solve_extremal(problem, SolverConfig(grid.step_h, config.picard_tol, config.picard_max_iter))
    return PropertyReport.from_violations(
        "maximal_domination", vals - eta.values, taus, tol, f"{len(eta.meta['epsilons'])} epsilon levels", kind="domination"
    )


def prabhakar_lemma_discrepancy(
    alpha: float, beta: float, sigma: float, lam: float, B: Normalization, grid: UniformGrid
) -> PropertyReport:
    """Numerical ABC derivative of ``t^(b-1) E^s_{a,b}(lam t^a)`` against the closed form
    ``B/(1-a) t^(b-1) E^{1+s}_{a,b}(lam t^a)``.

    The two agree only for ``lam = -a/(1-a)``; other values give a failing
    report that quantifies the gap.
    """
    a = as_alpha(alpha)
    fn = prabhakar_input(a, beta, sigma, lam)
    D = abc_derivative(fn, a, B, grid).values
    taus = grid.nodes
    closed = np.array(
        [B(a) / (1.0 - a) * t ** (beta - 1.0) * ml3(MLParams(a, beta, 1.0 + sigma), lam * t**a) for t in taus]
    )
    return PropertyReport.from_violations(
        "prabhakar_lemma", np.abs(D - closed), taus, _tol("lemma", grid), f"lambda={lam:g}, beta={beta:g}, sigma={sigma:g}", kind="lemma"
    )


# ---------------------------------------------------------------- suite


@dataclass
class _Case:
    name: str
    run: Callable[[], PropertyReport]
    negative: bool = False
    experimental: bool = False


def _negative(name: str, fn: Callable[[], PropertyReport]) -> PropertyReport:
    try:
        fn()
    except PreconditionUnmet as exc:
        return PropertyReport(name, True, 0.0, 0.0, 0.0, f"raised PreconditionUnmet: {exc}")
    except HypothesisViolation as exc:
        return PropertyReport(name, False, 1.0, 0.0, 0.0, f"raised HypothesisViolation instead: {exc}")
    return PropertyReport(name, False, 1.0, 0.0, 0.0, "no PreconditionUnmet raised")


def _fixtures(h: float, T: float, alpha: float, B: Normalization) -> list[_Case]:
    a = alpha
    k = B(a) / (1.0 - a)
    grid = UniformGrid.over(T, h)
    # theorems on crossings and extremes use their own interval lengths
    grid2 = UniformGrid.over(2.0 * T, h)
    const = DifferentiableInput.constant
    D = DifferentiableInput
    cfg = SolverConfig(grid.step_h)
    cases = [
        _Case("zero_crossing_max/linear", lambda: check_zero_crossing_max(D(lambda t: t - T, lambda t: 1.0), T, a, B, grid2)),
        _Case("zero_crossing_max/zero", lambda: check_zero_crossing_max(const(0.0), T, a, B, grid)),
        _Case(
            "zero_crossing_max/quadratic",
            lambda: check_zero_crossing_max(D(lambda t: -((t - T) ** 2), lambda t: -2.0 * (t - T)), T, a, B, grid2),
        ),
        _Case("zero_crossing_min/linear", lambda: check_zero_crossing_min(D(lambda t: T - t, lambda t: -1.0), T, a, B, grid2)),
        _Case("zero_crossing_min/zero", lambda: check_zero_crossing_min(const(0.0), T, a, B, grid)),
        _Case(
            "zero_crossing_min/quadratic",
            lambda: check_zero_crossing_min(D(lambda t: (t - T) ** 2, lambda t: 2.0 * (t - T)), T, a, B, grid2),
        ),
        _Case(
            "max_point_estimate/sine",
            lambda: check_max_point_estimate(
                D(lambda t: math.sin(math.pi * t / (2 * T)), lambda t: math.pi / (2 * T) * math.cos(math.pi * t / (2 * T))),
                a, B, grid,
            ),
        ),
        _Case("max_point_estimate/constant", lambda: check_max_point_estimate(const(3.0), a, B, grid)),
        _Case(
            "max_point_estimate/parabola",
            lambda: check_max_point_estimate(D(lambda t: -((t - T / 2) ** 2), lambda t: -2.0 * (t - T / 2)), a, B, grid),
        ),
        _Case(
            "min_point_estimate/sine",
            lambda: check_min_point_estimate(
                D(lambda t: -math.sin(math.pi * t / (2 * T)), lambda t: -math.pi / (2 * T) * math.cos(math.pi * t / (2 * T))),
                a, B, grid,
            ),
        ),
        _Case("min_point_estimate/constant", lambda: check_min_point_estimate(const(3.0), a, B, grid)),
        _Case(
            "min_point_estimate/parabola",
            lambda: check_min_point_estimate(D(lambda t: (t - T / 2) ** 2, lambda t: 2.0 * (t - T / 2)), a, B, grid),
        ),
        _Case(
            "strict_comparison/affine",
            lambda: check_strict_comparison(
                ComparisonPair(const(0.0), D(lambda t: 2.0 + t, lambda t: 1.0), lambda t, w: t + 1.0 - w), a, B, grid
            ),
        ),
        _Case(
            "strict_comparison/shifted_constant",
            lambda: check_strict_comparison(
                ComparisonPair(const(0.99), const(1.0), lambda t, w: 0.1 * (1.0 - w), StrictSide.LOWER_STRICT), a, B, grid
            ),
        ),
        _Case(
            "nonstrict_comparison/equal",
            lambda: check_nonstrict_comparison(ComparisonPair(const(1.0), const(1.0), lambda t, w: 0.0), 0.5 * k, a, B, grid),
        ),
        _Case(
            "nonstrict_comparison/linear_decay",
            lambda: check_nonstrict_comparison(
                ComparisonPair(const(0.0), D(lambda t: 1.0 + t, lambda t: 1.0), lambda t, w: -0.5 * k * w), 0.5 * k, a, B, grid
            ),
        ),
        _Case("ml_growth_bound/constant", lambda: check_ml_growth_bound(Trajectory(grid, np.full(grid.n_nodes, 2.0)), 2.0, a)),
        _Case("ml_growth_bound/zero", lambda: check_ml_growth_bound(Trajectory(grid, np.zeros(grid.n_nodes)), 0.0, a)),
        _Case("ml_growth_bound/solver", lambda: _growth_from_solver(0.3, a, B, T, grid.step_h)),
        _Case("prabhakar_growth_inequality/grid", lambda: check_prabhakar_growth_inequality(a, grid)),
        _Case(
            "prabhakar_growth_inequality/interval",
            lambda: check_prabhakar_growth_inequality(a, grid, np.linspace(0.0, 5.0, 100)),
        ),
        _Case(
            "maximal_domination/constant",
            lambda: check_maximal_domination(const(0.5), RhsFunction(lambda t, u: 0.0), 0.5, a, B, cfg, T),
        ),
        _Case("maximal_domination/solver", lambda: _domination_from_solver(a, B, T, cfg)),
        _Case(
            "periodic_comparison/constants",
            lambda: check_periodic_comparison(ComparisonPair(const(0.0), const(1.0), lambda t, w: -w), a, B, grid),
            experimental=True,
        ),
        _Case(
            "periodic_comparison/equal",
            lambda: check_periodic_comparison(ComparisonPair(const(1.0), const(1.0), lambda t, w: 0.0), a, B, grid),
            experimental=True,
        ),
        _Case("ml_self_growth/claimed", lambda: check_ml_self_growth(a, B, grid), experimental=True),
        _Case(
            "ml_growth_bound/counterexample_exp5",
            lambda: _growth_counterexample(a, B, grid),
            experimental=True,
        ),
    ]
    negatives = [
        ("zero_crossing_max", lambda: check_zero_crossing_max(D(lambda t: T - t, lambda t: -1.0), T, a, B, grid2)),
        ("zero_crossing_min", lambda: check_zero_crossing_min(D(lambda t: t - T, lambda t: 1.0), T, a, B, grid2)),
        (
            "max_point_estimate",
            lambda: check_max_point_estimate(D(lambda t: math.sin(t), lambda t: math.cos(t)), a, B, grid, tau0=0.0),
        ),
        (
            "min_point_estimate",
            lambda: check_min_point_estimate(D(lambda t: math.sin(t), lambda t: math.cos(t)), a, B, grid, tau0=T),
        ),
        (
            "strict_comparison",
            lambda: check_strict_comparison(
                ComparisonPair(const(1.0), D(lambda t: 1.0 + t, lambda t: 1.0), lambda t, w: t + 1.0 - w), a, B, grid
            ),
        ),
        (
            "nonstrict_comparison",
            lambda: check_nonstrict_comparison(
                ComparisonPair(const(2.0), const(1.0), lambda t, w: 0.0), 0.5 * k, a, B, grid
            ),
        ),
        ("ml_growth_bound", lambda: check_ml_growth_bound(Trajectory(grid, np.full(grid.n_nodes, 2.0)), 1.0, a)),
        ("prabhakar_growth_inequality", lambda: check_prabhakar_growth_inequality(a, grid, [-1.0, 0.0, 1.0])),
        (
            "periodic_comparison",
            lambda: check_periodic_comparison(ComparisonPair(const(0.0), const(1.0), lambda t, w: w), a, B, grid),
        ),
        (
            "maximal_domination",
            lambda: check_maximal_domination(const(2.0), RhsFunction(lambda t, u: 0.0), 1.0, a, B, cfg, T),
        ),
    ]
    for name, fn in negatives:
        cases.append(_Case(f"negative_control/{name}", fn, negative=True, experimental=name == "periodic_comparison"))
    return cases


def _growth_from_solver(c: float, a: float, B: Normalization, T: float, h: float) -> PropertyReport:
    k = B(a) / (1.0 - a)
    rhs = RhsFunction(lambda t, w: c * k * w * t / T, 0.0, c * k, 10.0, 10.0)
    m = solve_ivp(IVProblem(rhs, 1.0, T, a, B), SolverConfig(h))
    return check_ml_growth_bound(m, 1.0, a, abc_values=abc_derivative(m, a, B).values, B=B)


def _growth_counterexample(a: float, B: Normalization, grid: UniformGrid) -> PropertyReport:
    m = DifferentiableInput(lambda t: math.exp(5.0 * t), lambda t: 5.0 * math.exp(5.0 * t))
    vals, D = _sample(m, a, B, grid)
    rep = check_ml_growth_bound(Trajectory(grid, vals), 1.0, a, abc_values=D, B=B)
    return PropertyReport(
        "ml_growth_bound/counterexample_exp5",
        rep.passed,
        rep.worst_violation,
        rep.violation_location,
        rep.tolerance_used,
        "m = exp(5 tau) satisfies D m <= B/(1-a) m yet exceeds E_a(tau^a); " + rep.notes,
        experimental=True,
    )


def _domination_from_solver(a: float, B: Normalization, T: float, cfg: SolverConfig) -> PropertyReport:
    f = RhsFunction(lambda t, w: t * math.cos(w), T, T, T, 1.0)
    m = solve_ivp(IVProblem(f, 0.5, T, a, B), cfg)
    g = RhsFunction(lambda t, u: t, 1.0, 0.0, T, 1.0)
    return check_maximal_domination(m, g, 1.0, a, B, cfg)


def run_suite(
    h: float = 2e-3, T: float = 1.0, alpha: float = 0.5, B: Normalization = Normalization()
) -> list[PropertyReport]:
    """Run every fixture and negative control; reports are sorted by name."""
    a = as_alpha(alpha)
    out = []
    for case in _fixtures(h, T, a, B):
        if case.negative:
            rep = _negative(case.name, case.run)
        else:
            try:
                rep = case.run()
            except Exception as exc:  # a crashing fixture is a failed property
                rep = PropertyReport(case.name, False, 1.0, 0.0, 0.0, f"{type(exc).__name__}: {exc}")
        out.append(
            PropertyReport(
                case.name,
                rep.passed,
                rep.worst_violation,
                rep.violation_location,
                rep.tolerance_used,
                rep.notes,
                case.experimental or rep.experimental,
            )
        )
    return sorted(out, key=lambda r: r.property_name)


def suite_passed(reports: Iterable[PropertyReport]) -> bool:
    """True iff every non-experimental report passed."""
    return all(r.passed for r in reports if not r.experimental)
