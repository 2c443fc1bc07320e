r"""Solvers for ``D^alpha omega = f(tau, omega)``, ``omega(0) = omega0`` (ABC sense).

Everything goes through the equivalent integral equation

.. math::

    \omega(\tau) = \omega_0 + \frac{1-\alpha}{B}f(\tau,\omega(\tau))
        + \frac{\alpha}{B\Gamma(\alpha)}\int_0^\tau(\tau-\sigma)^{\alpha-1}f(\sigma,\omega(\sigma))\,d\sigma

discretised with product-trapezoidal weights. The node value enters both
the pointwise term and the last quadrature weight, so each node is a scalar
fixed-point problem with contraction factor ``kappa * L2``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import (
    ConsistencyError,
    ContractionViolation,
    DomainError,
    DominationFailure,
    HypothesisViolation,
    MajorantFailure,
    NonConvergence,
    PreconditionUnmet,
)
from .operators import FractionalOrder, Normalization, Trajectory, UniformGrid, as_alpha, rl_weights

log = logging.getLogger(__name__)

__all__ = [
    "RhsFunction",
    "IVProblem",
    "ConsistencyMode",
    "SolverConfig",
    "DelayConfig",
    "solve_ivp",
    "consistency_check",
    "local_existence_interval",
    "extremal_existence_interval",
    "equicontinuity_modulus",
    "solve_delay_approx",
    "delay_convergence_study",
    "solve_extremal",
    "continue_globally",
]


@dataclass(frozen=True)
class RhsFunction:
    """Right-hand side ``f(tau, omega)`` with its rectangle and Lipschitz data.

    ``|f| <= bound_M`` on ``|omega - omega0| <= box_halfwidth_b`` and
    ``|f(t1, w) - f(t2, e)| <= lipschitz_tau |t1 - t2| + lipschitz_omega |w - e|``
    are the caller's claims; :meth:`spot_check` samples them.
    """

    eval: Callable[[float, float], float]
    lipschitz_tau: float = 0.0
    lipschitz_omega: float = 0.0
    bound_M: float = 1.0
    box_halfwidth_b: float = 1.0
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.lipschitz_tau < 0 or self.lipschitz_omega < 0:
            raise DomainError("Lipschitz constants must be non-negative")
        if not self.bound_M > 0 or not self.box_halfwidth_b > 0:
            raise DomainError("bound_M and box_halfwidth_b must be positive")

    def __call__(self, tau: float, omega: float) -> float:
        return float(self.eval(tau, omega))

    def shifted(self, eps: float) -> "RhsFunction":
        """``f + eps``, keeping the Lipschitz constants."""
        f = self.eval
        return replace(
            self,
            eval=lambda t, w: f(t, w) + eps,
            bound_M=self.bound_M + abs(eps),
            name=f"{self.name}{eps:+g}",
        )

    def time_shifted(self, t0: float) -> "RhsFunction":
        """``(t, w) -> f(t0 + t, w)``."""
        f = self.eval
        return replace(self, eval=lambda t, w: f(t0 + t, w), name=f"{self.name}@{t0:g}")

    def spot_check(self, T: float, center: float, n: int = 100, seed: int = 0) -> float:
        """Largest excess of the claimed bounds over ``n`` random pairs in the rectangle."""
        rng = np.random.default_rng(seed)
        b = self.box_halfwidth_b
        t = rng.uniform(0.0, T, size=(n, 2))
        w = rng.uniform(center - b, center + b, size=(n, 2))
        worst = -math.inf
        for (t1, t2), (w1, w2) in zip(t, w):
            lhs = abs(self(t1, w1) - self(t2, w2))
            rhs = self.lipschitz_tau * abs(t1 - t2) + self.lipschitz_omega * abs(w1 - w2)
            worst = max(worst, lhs - rhs, abs(self(t1, w1)) - self.bound_M)
        return worst


@dataclass(frozen=True)
class IVProblem:
    rhs: RhsFunction
    omega0: float
    horizon_T: float
    alpha: float
    B: Normalization = field(default_factory=Normalization)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.horizon_T > 0 and math.isfinite(self.horizon_T)):
            raise DomainError(f"horizon_T must be finite and positive, got {self.horizon_T}")
        if not math.isfinite(self.omega0):
            raise DomainError("omega0 must be finite")

    @property
    def b_alpha(self) -> float:
        return self.B(self.alpha)

    def with_rhs(self, rhs: RhsFunction, omega0: float | None = None) -> "IVProblem":
        return replace(self, rhs=rhs, omega0=self.omega0 if omega0 is None else omega0)


class ConsistencyMode(enum.Enum):
    WARN = "warn"
    STRICT = "strict"


@dataclass(frozen=True)
class SolverConfig:
    step_h: float
    picard_tol: float = 1e-12
    picard_max_iter: int = 200
    consistency_mode: ConsistencyMode = ConsistencyMode.WARN
    consistency_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not self.step_h > 0:
            raise DomainError("step_h must be positive")
        if not self.picard_tol > 0:
            raise DomainError("picard_tol must be positive")
        if isinstance(self.consistency_mode, str):
            object.__setattr__(self, "consistency_mode", ConsistencyMode(self.consistency_mode.lower()))


@dataclass(frozen=True)
class DelayConfig:
    """Delay ``epsilon`` and the initial history on ``[-delta, 0]``."""

    epsilon: float
    delta: float
    history: Callable[[float], float]
    omega0: float
    b: float

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise PreconditionUnmet(f"epsilon must be positive, got {self.epsilon}")
        if not self.delta >= self.epsilon:
            raise PreconditionUnmet(f"delta={self.delta} must be at least epsilon={self.epsilon}")
        if self.history(0.0) != self.omega0:
            raise PreconditionUnmet("history(0) must equal omega0 exactly")
        for s in np.linspace(-self.delta, 0.0, 201):
            if abs(self.history(float(s)) - self.omega0) > self.b:
                raise PreconditionUnmet(f"|history({s:g}) - omega0| exceeds b={self.b}")


def consistency_check(problem: IVProblem, tol: float = 1e-10) -> bool:
    """True iff ``|f(0, omega0)| <= tol``; the ABC derivative of a smooth function vanishes at 0."""
    return abs(problem.rhs(0.0, problem.omega0)) <= tol


def _enforce_consistency(value: float, config: SolverConfig, what: str) -> None:
    if abs(value) <= config.consistency_tol:
        return
    msg = f"{what} = {value:.6g} is not zero; the integral equation and the ABC problem disagree at tau=0"
    if config.consistency_mode is ConsistencyMode.STRICT:
        raise ConsistencyError(msg)
    log.warning(msg)


def _contraction_factors(problem: IVProblem, h: float) -> tuple[float, float]:
    a, b = problem.alpha, problem.b_alpha
    kappa = (1.0 - a) / b + a / b * h**a / math.gamma(a + 2.0)
    return (1.0 - a) * problem.rhs.lipschitz_omega / b, kappa * problem.rhs.lipschitz_omega


class _Integrator:
    """Incremental product-trapezoidal solver with full memory.

    ``capacity`` steps are preallocated; :meth:`advance` fills nodes up to a
    given index. ``t0`` offsets the time passed to ``f`` (used for restarts).
    """

    def __init__(self, problem: IVProblem, config: SolverConfig, grid: UniformGrid, t0: float = 0.0):
        self.f = problem.rhs
        self.omega0 = problem.omega0
        self.h = grid.step_h
        self.t0 = t0
        self.tol = config.picard_tol
        self.max_iter = config.picard_max_iter
        a, b = problem.alpha, problem.b_alpha
        self.a0, self.inner = rl_weights(a, grid.n_nodes - 1)
        self.point = (1.0 - a) / b
        self.memory = a / b * self.h**a / math.gamma(a + 2.0)
        self.kappa = self.point + self.memory
        self.omega = np.empty(grid.n_nodes)
        self.F = np.empty(grid.n_nodes)
        self.omega[0] = problem.omega0
        self.F[0] = self.f(t0, problem.omega0)
        self.n = 0
        self.max_iterations = 0

    def tau(self, k: int) -> float:
        return self.t0 + k * self.h

    def advance(self, n_to: int) -> None:
        omega, F, inner = self.omega, self.F, self.inner
        for n in range(self.n + 1, n_to + 1):
            hist = self.a0[n] * F[0] + float(np.dot(inner[n - 1 : 0 : -1], F[1:n]))
            base = self.omega0 + self.memory * hist
            t = self.tau(n)
            x = 2.0 * omega[n - 1] - omega[n - 2] if n >= 2 else omega[n - 1]
            x, it = self._fixed_point(lambda y: base + self.kappa * self.f(t, y), x, t)
            self.max_iterations = max(self.max_iterations, it)
            omega[n] = x
            F[n] = self.f(t, x)
        self.n = max(self.n, n_to)

    def _fixed_point(self, g: Callable[[float], float], x: float, t: float) -> tuple[float, int]:
        """Iterate ``x = g(x)`` with a safeguarded Aitken step after every two plain steps."""
        prev = None
        for it in range(1, self.max_iter + 1):
            x_new = g(x)
            if not math.isfinite(x_new):
                raise NonConvergence(f"fixed-point iterate diverged at tau={t:g}")
            step = x_new - x
            if abs(step) <= self.tol * max(1.0, abs(x_new)):
                return x_new, it
            if prev is not None:
                denom = step - prev
                if denom != 0.0:
                    accel = x_new - step * step / denom
                    # keep the extrapolation only if it shrinks the residual
                    if math.isfinite(accel) and abs(g(accel) - accel) < abs(step):
                        x, prev = accel, None
                        continue
            x, prev = x_new, step
        raise NonConvergence(
            f"fixed-point iteration did not reach {self.tol:g} within {self.max_iter} iterations at tau={t:g}"
        )


def _prepare(problem: IVProblem, config: SolverConfig, T: float | None = None) -> UniformGrid:
    grid = UniformGrid.over(problem.horizon_T if T is None else T, config.step_h)
    raw, discrete = _contraction_factors(problem, grid.step_h)
    if raw >= 1.0:
        raise ContractionViolation(f"L2 (1 - alpha) / B(alpha) = {raw:.6g} >= 1")
    if discrete >= 1.0:
        raise ContractionViolation(f"per-node contraction factor {discrete:.6g} >= 1; reduce step_h")
    return grid


def _solve(problem: IVProblem, config: SolverConfig) -> Trajectory:
    grid = _prepare(problem, config)
    integ = _Integrator(problem, config, grid)
    integ.advance(grid.n_nodes - 1)
    return Trajectory(
        grid,
        integ.omega,
        meta={"max_picard_iterations": integ.max_iterations, "contraction": integ.kappa * problem.rhs.lipschitz_omega},
    )


def solve_ivp(problem: IVProblem, config: SolverConfig) -> Trajectory:
    """Solve the IVP on ``[0, horizon_T]``; node 0 is ``omega0`` exactly.

    ``meta`` carries the largest per-node iteration count and the contraction factor.
    """
    _enforce_consistency(problem.rhs(0.0, problem.omega0), config, "f(0, omega0)")
    return _solve(problem, config)


def _check_interval_inputs(M: float, b: float, T: float) -> None:
    if not (M > 0 and b > 0 and T > 0):
        raise DomainError(f"need M > 0, b > 0, T > 0; got M={M}, b={b}, T={T}")


def local_existence_interval(
    M: float, b: float, alpha: float | FractionalOrder, B: Normalization = Normalization(), T: float = math.inf
) -> float:
    """``min(T, [Gamma(a) (b B - M (1-a)) / M]^(1/a))``; requires ``M (1-a) < b B``."""
    a = as_alpha(alpha)
    _check_interval_inputs(M, b, T)
    slack = b * B(a) - M * (1.0 - a)
    if not slack > 0:
        raise HypothesisViolation(f"local existence needs M(1-alpha) < b B(alpha); got {M * (1 - a):.6g} >= {b * B(a):.6g}")
    return min(T, (math.gamma(a) * slack / M) ** (1.0 / a))


def extremal_existence_interval(
    M: float, b: float, alpha: float | FractionalOrder, B: Normalization = Normalization(), T: float = math.inf
) -> float:
    """``min(T, [(b B - (2M+b)(1-a)) Gamma(a) / (2M+b)]^(1/a))``."""
    a = as_alpha(alpha)
    _check_interval_inputs(M, b, T)
    slack = b * B(a) - (2.0 * M + b) * (1.0 - a)
    if not slack > 0:
        raise HypothesisViolation("extremal existence needs (2M + b)(1 - alpha) < b B(alpha)")
    return min(T, (slack * math.gamma(a) / (2.0 * M + b)) ** (1.0 / a))


def equicontinuity_modulus(
    eps_tilde: float,
    alpha: float | FractionalOrder,
    B: Normalization,
    L1: float,
    L2: float,
    M: float,
) -> float:
    """``eps * Gamma(a) (B - (1-a) L2) / (Gamma(a) (1-a) L1 + 2M)``."""
    a = as_alpha(alpha)
    b = B(a)
    if not L2 < b / (1.0 - a):
        raise HypothesisViolation(f"need L2 < B(alpha)/(1-alpha) = {b / (1 - a):.6g}, got {L2}")
    if eps_tilde < 0 or L1 < 0 or L2 < 0 or not M > 0:
        raise DomainError("need eps_tilde >= 0, L1 >= 0, L2 >= 0, M > 0")
    g = math.gamma(a)
    return eps_tilde * g * (b - (1.0 - a) * L2) / (g * (1.0 - a) * L1 + 2.0 * M)


def solve_delay_approx(problem: IVProblem, dconf: DelayConfig, config: SolverConfig) -> Trajectory:
    """Explicit solve of the delayed integral equation ``f(tau, omega(tau - eps))``.

    The solution is built window by window on ``[0, min(T, k eps)]``; within a
    window every lagged argument refers to already-known values. Lagged
    points between nodes use linear interpolation. ``epsilon`` must be at
    least one grid step.
    """
    if dconf.omega0 != problem.omega0:
        raise PreconditionUnmet("DelayConfig.omega0 differs from the problem's omega0")
    grid = UniformGrid.over(problem.horizon_T, config.step_h)
    h, eps = grid.step_h, dconf.epsilon
    if eps < h * (1.0 - 1e-12):
        raise DomainError(f"delay {eps:g} is shorter than the grid step {h:g}")
    f, hist_fn = problem.rhs, dconf.history
    _enforce_consistency(f(0.0, hist_fn(-eps)), config, "f(0, history(-epsilon))")
    a, b = problem.alpha, problem.b_alpha
    a0, inner = rl_weights(a, grid.n_nodes - 1)
    point = (1.0 - a) / b
    memory = a / b * h**a / math.gamma(a + 2.0)
    taus = grid.nodes
    omega = np.empty(grid.n_nodes)
    F = np.empty(grid.n_nodes)
    omega[0] = problem.omega0

    def lagged(k: int) -> float:
        s = taus[k] - eps
        if s <= 0.0:
            return float(hist_fn(max(s, -dconf.delta)))
        # only nodes below k are known; s <= taus[k-1] because eps >= h
        return float(np.interp(s, taus[:k], omega[:k]))

    F[0] = f(0.0, lagged(0))
    windows = 0
    n = 0
    while n < grid.n_nodes - 1:
        windows += 1
        end_t = min(grid.T, windows * eps)
        end = min(grid.n_nodes - 1, int(math.floor(end_t / h + 1e-9)))
        end = max(end, n + 1)
        for k in range(n + 1, end + 1):
            F[k] = f(taus[k], lagged(k))
            hist = a0[k] * F[0] + float(np.dot(inner[k - 1 :: -1], F[1 : k + 1]))
            omega[k] = problem.omega0 + point * F[k] + memory * hist
        n = end
    excess = float(np.max(np.abs(omega - problem.omega0)) - dconf.b)
    return Trajectory(grid, omega, meta={"windows": windows, "epsilon": eps, "box_excess": excess})


def delay_convergence_study(
    problem: IVProblem,
    history: Callable[[float], float],
    epsilons: list[float],
    config: SolverConfig,
    b: float | None = None,
) -> list[tuple[float, float]]:
    """``(eps, sup |omega_eps - omega|)`` for each delay, against :func:`solve_ivp`."""
    reference = solve_ivp(problem, config)
    bound = problem.rhs.box_halfwidth_b if b is None else b
    out = []
    for eps in epsilons:
        dconf = DelayConfig(eps, max(epsilons), history, problem.omega0, bound)
        approx = solve_delay_approx(problem, dconf, config)
        out.append((eps, float(np.max(np.abs(approx.values - reference.values)))))
    return out


def solve_extremal(
    problem: IVProblem,
    config: SolverConfig,
    eps0: float | None = None,
    eps_factor: float = 0.5,
    stop_tol: float = 1e-8,
    max_levels: int = 50,
) -> tuple[Trajectory, Trajectory]:
    """Maximal and minimal solutions as limits of ``f +- eps``, ``omega0 +- eps``.

    ``eps_n = eps0 * eps_factor**n``; stops once both branches move by less
    than ``stop_tol`` in the sup norm. Each returned trajectory's ``meta``
    holds the epsilon schedule and every iterate of its branch.
    """
    b = problem.rhs.box_halfwidth_b
    eps0 = 0.5 * b if eps0 is None else eps0
    if not 0 < eps0 <= 0.5 * b:
        raise PreconditionUnmet(f"need 0 < eps0 <= b/2 = {0.5 * b:g}, got {eps0}")
    if not 0 < eps_factor < 1:
        raise DomainError(f"eps_factor must lie in (0, 1), got {eps_factor}")
    _enforce_consistency(problem.rhs(0.0, problem.omega0), config, "f(0, omega0)")
    epsilons: list[float] = []
    upper: list[np.ndarray] = []
    lower: list[np.ndarray] = []
    grid = None
    for n in range(max_levels):
        eps = eps0 * eps_factor**n
        up = _solve(problem.with_rhs(problem.rhs.shifted(eps), problem.omega0 + eps), config)
        lo = _solve(problem.with_rhs(problem.rhs.shifted(-eps), problem.omega0 - eps), config)
        grid = up.grid
        epsilons.append(eps)
        upper.append(np.array(up.values))
        lower.append(np.array(lo.values))
        if n > 0:
            d_up = float(np.max(np.abs(upper[-1] - upper[-2])))
            d_lo = float(np.max(np.abs(lower[-1] - lower[-2])))
            if d_up < stop_tol and d_lo < stop_tol:
                break
    else:
        raise NonConvergence(f"extremal iteration did not settle to {stop_tol:g} within {max_levels} levels")
    assert grid is not None
    meta_up = {"epsilons": tuple(epsilons), "iterates": tuple(upper), "branch": "maximal"}
    meta_lo = {"epsilons": tuple(epsilons), "iterates": tuple(lower), "branch": "minimal"}
    return Trajectory(grid, upper[-1], meta=meta_up), Trajectory(grid, lower[-1], meta=meta_lo)


def _window_bound(rhs: RhsFunction, t_lo: float, t_hi: float, center: float, n: int = 41) -> float:
    b = rhs.box_halfwidth_b
    ts = np.linspace(t_lo, t_hi, n)
    ws = np.linspace(center - b, center + b, n)
    return max(abs(rhs(float(t), float(w))) for t in ts for w in ws)


def _window_length(problem: IVProblem, t_s: float, remaining: float, center: float, h: float) -> float:
    """Largest ``beta <= remaining`` with ``beta <= local interval of M sampled on [t_s, t_s + beta]``.

    Shrinking the window lowers ``M``, so the candidate is reduced until it
    is self-consistent.
    """
    b, a = problem.rhs.box_halfwidth_b, problem.alpha
    beta = remaining
    for _ in range(100):
        M = _window_bound(problem.rhs, t_s, t_s + beta, center)
        if M * (1.0 - a) >= b * problem.b_alpha:
            if beta <= h:
                # raises HypothesisViolation with the offending numbers
                local_existence_interval(M, b, a, problem.B, beta)
            beta = 0.5 * beta
            continue
        if M == 0.0:
            return beta
        allowed = local_existence_interval(M, b, a, problem.B, remaining)
        if allowed >= beta * (1.0 - 1e-12):
            return beta
        beta = allowed
    return beta


def continue_globally(
    problem: IVProblem,
    majorant_g: RhsFunction,
    u0: float,
    config: SolverConfig,
    T_max: float,
    *,
    restart: bool = False,
    domination_tol: float | None = None,
    seed: int = 0,
) -> Trajectory:
    """Extend the solution to ``[0, T_max]`` window by window under a majorant.

    Each window length is the local existence interval for the bound ``M``
    re-sampled on the window's own rectangle, snapped to the grid. On every window
    the majorant problem ``D u = g(tau, u)``, ``u(0) = u0`` is advanced first,
    then the target, and ``|omega| <= eta + domination_tol`` is asserted.

    By default the memory of the integral equation is kept across windows,
    so the result is the solution of the original problem. ``restart=True``
    restarts each window as a fresh problem from the endpoint value.
    """
    if not u0 >= 0:
        raise PreconditionUnmet("majorant initial value u0 must be non-negative")
    if not abs(problem.omega0) < u0:
        raise PreconditionUnmet(f"need |omega0| < u0; got |{problem.omega0}| >= {u0}")
    majorant = problem.with_rhs(majorant_g, u0)
    grid = _prepare(replace(problem, horizon_T=T_max), config, T_max)
    _prepare(replace(majorant, horizon_T=T_max), config, T_max)
    h, N = grid.step_h, grid.n_nodes - 1
    tol = h if domination_tol is None else domination_tol
    rng = np.random.default_rng(seed)
    a, b_alpha = problem.alpha, problem.b_alpha

    omega = np.empty(N + 1)
    eta = np.empty(N + 1)
    omega[0], eta[0] = problem.omega0, u0
    target = _Integrator(problem, config, grid)
    upper = _Integrator(majorant, config, grid)
    windows: list[tuple[float, float]] = []
    s = 0
    while s < N:
        t_s = s * h
        beta = _window_length(problem, t_s, T_max - t_s, omega[s], h)
        e = min(N, s + max(1, int(math.floor(beta / h + 1e-9))))
        taus = t_s + h * np.arange(e - s + 1)
        radius = abs(omega[s]) + problem.rhs.box_halfwidth_b
        for t, w in zip(taus, rng.uniform(-radius, radius, size=len(taus))):
            if abs(problem.rhs(t, w)) > majorant_g(t, abs(w)) + 1e-12:
                raise HypothesisViolation(f"|f({t:g}, {w:g})| exceeds g({t:g}, |{w:g}|)")
        if restart and s > 0:
            sub_grid = UniformGrid(h, e - s + 1)
            target = _Integrator(problem.with_rhs(problem.rhs.time_shifted(t_s), omega[s]), config, sub_grid, 0.0)
            upper = _Integrator(majorant.with_rhs(majorant_g.time_shifted(t_s), eta[s]), config, sub_grid, 0.0)
            offset = s
        else:
            offset = 0
        try:
            upper.advance(e - offset)
        except (NonConvergence, ContractionViolation) as exc:
            raise MajorantFailure(f"majorant problem failed on [{t_s:g}, {e * h:g}]: {exc}") from exc
        target.advance(e - offset)
        eta[s + 1 : e + 1] = upper.omega[s + 1 - offset : e + 1 - offset]
        omega[s + 1 : e + 1] = target.omega[s + 1 - offset : e + 1 - offset]
        gap = np.abs(omega[s : e + 1]) - eta[s : e + 1]
        worst = int(np.argmax(gap))
        if gap[worst] > tol:
            raise DominationFailure(
                f"|omega| exceeds the majorant by {gap[worst]:.3e} at tau={(s + worst) * h:g}"
            )
        windows.append((t_s, e * h))
        s = e
    return Trajectory(grid, omega, meta={"windows": tuple(windows), "majorant": eta.copy(), "restart": restart})
