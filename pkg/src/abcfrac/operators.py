r"""ABC derivative, AB integral and Riemann-Liouville integral on uniform grids.

Conventions: ``c = alpha / (1 - alpha)`` and the ABC kernel is
:math:`E_\alpha(-c\,s^\alpha)` evaluated at lag ``s``.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import DerivativeUnavailable, DomainError
from . import quadrature
from .special_functions import MLParams, ml1, ml2, ml3

log = logging.getLogger(__name__)

__all__ = [
    "FractionalOrder",
    "NormKind",
    "Normalization",
    "UniformGrid",
    "Trajectory",
    "DifferentiableInput",
    "as_alpha",
    "abc_kernel",
    "rl_weights",
    "rl_integral",
    "ab_integral",
    "abc_derivative",
    "prabhakar_derivative_closed_form",
    "prabhakar_input",
    "ml_growth_derivative",
    "ml_growth_derivative_quadrature",
]


@dataclass(frozen=True)
class FractionalOrder:
    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"fractional order must satisfy 0 < alpha < 1, got {self.alpha}")

    def __float__(self) -> float:
        return float(self.alpha)


def as_alpha(alpha: float | FractionalOrder) -> float:
    """Validate an order given either as a float or as a FractionalOrder."""
    if isinstance(alpha, FractionalOrder):
        return alpha.alpha
    return FractionalOrder(float(alpha)).alpha


class NormKind(enum.Enum):
    CONSTANT_ONE = "constant_one"
    ALPHA_BLEND = "alpha_blend"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Normalization:
    """The normalisation function ``B(alpha)``.

    ``ALPHA_BLEND`` is ``B(a) = 1 - a + a / Gamma(a)``. Custom functions are
    checked for ``B(0) = B(1) = 1`` and positivity on a sample of ``[0, 1]``.
    """

    kind: NormKind = NormKind.CONSTANT_ONE
    custom_eval: Callable[[float], float] | None = None

    def __post_init__(self) -> None:
        if self.kind is NormKind.CUSTOM:
            if self.custom_eval is None:
                raise DomainError("custom normalization needs custom_eval")
            for end in (0.0, 1.0):
                if not math.isclose(self.custom_eval(end), 1.0, rel_tol=1e-12, abs_tol=1e-12):
                    raise DomainError(f"custom normalization must satisfy B({end:g}) = 1")
            for a in np.linspace(0.0, 1.0, 101):
                if not self.custom_eval(float(a)) > 0.0:
                    raise DomainError(f"custom normalization not positive at alpha={a:g}")

    @classmethod
    def constant_one(cls) -> "Normalization":
        return cls(NormKind.CONSTANT_ONE)

    @classmethod
    def alpha_blend(cls) -> "Normalization":
        return cls(NormKind.ALPHA_BLEND)

    @classmethod
    def custom(cls, fn: Callable[[float], float]) -> "Normalization":
        return cls(NormKind.CUSTOM, fn)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[float]]) -> "Normalization":
        """Piecewise-linear ``B`` through ``(alpha, B)`` pairs."""
        pts = sorted((float(a), float(b)) for a, b in table)
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        return cls.custom(lambda a: float(np.interp(a, xs, ys)))

    def __call__(self, alpha: float) -> float:
        if self.kind is NormKind.CONSTANT_ONE:
            return 1.0
        if self.kind is NormKind.ALPHA_BLEND:
            if alpha == 0.0:
                return 1.0
            return 1.0 - alpha + alpha / math.gamma(alpha)
        assert self.custom_eval is not None
        return float(self.custom_eval(alpha))


@dataclass(frozen=True)
class UniformGrid:
    """Nodes ``k * step_h`` for ``k = 0 .. n_nodes - 1``."""

    step_h: float
    n_nodes: int

    def __post_init__(self) -> None:
        if not self.step_h > 0.0 or not math.isfinite(self.step_h):
            raise DomainError(f"step_h must be positive, got {self.step_h}")
        if self.n_nodes < 2:
            raise DomainError(f"a grid needs at least 2 nodes, got {self.n_nodes}")

    @classmethod
    def over(cls, T: float, h: float) -> "UniformGrid":
        """Grid on ``[0, T]`` whose step is the nearest value to ``h`` dividing ``T``."""
        if not T > 0.0 or not h > 0.0:
            raise DomainError(f"need T > 0 and h > 0, got T={T}, h={h}")
        steps = max(1, int(round(T / h)))
        step = T / steps
        if abs(step - h) > 1e-12 * h:
            log.info("step adjusted from %g to %g so that it divides T=%g", h, step, T)
        return cls(step, steps + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.step_h * np.arange(self.n_nodes)

    @property
    def T(self) -> float:
        return self.step_h * (self.n_nodes - 1)

    def index_of(self, tau: float) -> int:
        """Index of the node nearest to ``tau``."""
        k = int(round(tau / self.step_h))
        if not 0 <= k < self.n_nodes:
            raise DomainError(f"tau={tau} lies outside [0, {self.T}]")
        return k


@dataclass(frozen=True)
class Trajectory:
    """Scalar function sampled on a uniform grid. Values are read-only."""

    grid: UniformGrid
    values: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n_nodes,):
            raise DomainError(f"expected {self.grid.n_nodes} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("trajectory values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def taus(self) -> np.ndarray:
        return self.grid.nodes

    def __len__(self) -> int:
        return self.grid.n_nodes

    def __neg__(self) -> "Trajectory":
        return Trajectory(self.grid, -self.values)

    def to_csv(self, path: str | Path | None = None) -> str:
        """Write ``tau,value`` rows with ``%.12g`` formatting; return the text."""
        buf = io.StringIO()
        buf.write("tau,value\n")
        for t, v in zip(self.taus, self.values):
            buf.write(f"{t:.12g},{v:.12g}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source: str | Path, *, text: str | None = None) -> "Trajectory":
        """Parse the two-column CSV format. The tau column must be uniform from 0."""
        raw = text if text is not None else Path(source).read_text()
        rows = list(csv.reader(io.StringIO(raw)))
        if not rows or [c.strip() for c in rows[0]] != ["tau", "value"]:
            raise DomainError("trajectory CSV must start with the header 'tau,value'")
        try:
            data = np.array([[float(a), float(b)] for a, b in (r for r in rows[1:] if r)])
        except ValueError as exc:
            raise DomainError(f"malformed trajectory CSV: {exc}") from exc
        if data.shape[0] < 2:
            raise DomainError("trajectory CSV needs at least two rows")
        taus = data[:, 0]
        step = (taus[-1] - taus[0]) / (len(taus) - 1)
        grid = UniformGrid(step, len(taus))
        # %.12g round-trips tau to ~1e-12 relative
        if abs(taus[0]) > 1e-12 or np.max(np.abs(taus - grid.nodes)) > 1e-9 * max(1.0, grid.T):
            raise DomainError("tau column must be a uniform grid starting at 0")
        return cls(grid, data[:, 1])


@dataclass(frozen=True)
class DifferentiableInput:
    """A function together with (optionally) its exact derivative.

    Without ``derivative_fn`` the derivative is taken from second-order
    finite differences of the sampled values.
    """

    value_fn: Callable[[float], float]
    derivative_fn: Callable[[float], float] | None = None

    @classmethod
    def from_trajectory(cls, traj: Trajectory) -> "DifferentiableInput":
        taus, vals = traj.taus, traj.values
        return cls(lambda t: float(np.interp(t, taus, vals)))

    @classmethod
    def constant(cls, c: float) -> "DifferentiableInput":
        return cls(lambda t: c, lambda t: 0.0)

    def sample(self, grid: UniformGrid) -> tuple[np.ndarray, np.ndarray]:
        """Values and derivative values at the grid nodes."""
        taus = grid.nodes
        vals = np.array([self.value_fn(float(t)) for t in taus], dtype=float)
        if self.derivative_fn is not None:
            der = np.array([self.derivative_fn(float(t)) for t in taus], dtype=float)
        else:
            if grid.n_nodes < 3:
                raise DerivativeUnavailable("finite-difference derivative needs at least 3 nodes")
            der = np.gradient(vals, grid.step_h, edge_order=2)
        return vals, der

    def __neg__(self) -> "DifferentiableInput":
        f, d = self.value_fn, self.derivative_fn
        return DifferentiableInput(lambda t: -f(t), None if d is None else (lambda t: -d(t)))


def abc_kernel(alpha: float, lags: np.ndarray) -> np.ndarray:
    """``E_alpha(-c s**alpha)`` at each (non-negative) lag ``s``."""
    c = alpha / (1.0 - alpha)
    return np.array([ml1(alpha, -c * float(s) ** alpha) if s > 0 else 1.0 for s in lags])


def rl_weights(alpha: float, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    r"""Product-trapezoidal weights for the Riemann-Liouville integral.

    With ``p = alpha + 1``, the integral at node ``n`` is
    ``h**alpha / Gamma(alpha + 2) * (a0[n] f_0 + sum_{j=1}^{n} inner[n-j] f_j)`` where
    ``a0[n] = (n-1)**p - (n-1-alpha) n**alpha``, ``inner[0] = 1`` and
    ``inner[k] = (k+1)**p - 2 k**p + (k-1)**p``. These integrate the
    piecewise-linear interpolant exactly against ``(t_n - s)**(alpha-1)``.
    """
    k = np.arange(n_steps + 1, dtype=float)
    p = alpha + 1.0
    a0 = np.zeros(n_steps + 1)
    n = k[1:]
    a0[1:] = (n - 1.0) ** p - (n - 1.0 - alpha) * n**alpha
    inner = np.ones(n_steps + 1)
    m = k[1:]
    inner[1:] = (m + 1.0) ** p - 2.0 * m**p + (m - 1.0) ** p
    return a0, inner


def _rl_sum(alpha: float, step: float, f: np.ndarray) -> np.ndarray:
    n_steps = len(f) - 1
    a0, inner = rl_weights(alpha, n_steps)
    out = np.zeros(n_steps + 1)
    if n_steps == 0:
        return out
    # conv[n] = sum_{j=1}^{n} inner[n-j] f_j
    conv = np.convolve(inner, np.concatenate(([0.0], f[1:])))[: n_steps + 1]
    out[1:] = (a0[1:] * f[0] + conv[1:]) * step**alpha / math.gamma(alpha + 2.0)
    return out


def rl_integral(traj: Trajectory, alpha: float | FractionalOrder) -> Trajectory:
    """Riemann-Liouville integral of order ``alpha`` at every grid node."""
    a = as_alpha(alpha)
    return Trajectory(traj.grid, _rl_sum(a, traj.grid.step_h, traj.values))


def ab_integral(
    traj: Trajectory, alpha: float | FractionalOrder, B: Normalization = Normalization()
) -> Trajectory:
    """AB integral ``(1-a)/B f + a/B * RL[f]``."""
    a = as_alpha(alpha)
    b = B(a)
    rl = _rl_sum(a, traj.grid.step_h, traj.values)
    return Trajectory(traj.grid, (1.0 - a) / b * traj.values + a / b * rl)


def abc_derivative(
    input: DifferentiableInput | Trajectory,
    alpha: float | FractionalOrder,
    B: Normalization = Normalization(),
    grid: UniformGrid | None = None,
) -> Trajectory:
    """ABC derivative at the grid nodes by the trapezoidal rule on kernel times derivative.

    A Trajectory input is differentiated by finite differences on its own grid.
    Node 0 is exactly zero.
    """
    a = as_alpha(alpha)
    if isinstance(input, Trajectory):
        grid = input.grid if grid is None else grid
        input = DifferentiableInput.from_trajectory(input)
    if grid is None:
        raise DomainError("abc_derivative needs a grid for callable input")
    _, der = input.sample(grid)
    h = grid.step_h
    kern = abc_kernel(a, grid.nodes)
    full = np.convolve(kern, der)[: grid.n_nodes]
    # trapezoid: halve the two end contributions
    trap = full - 0.5 * kern * der[0] - 0.5 * kern[0] * der
    out = B(a) / (1.0 - a) * h * trap
    out[0] = 0.0
    return Trajectory(grid, out)


def prabhakar_input(alpha: float, beta: float, sigma: float, lam: float) -> DifferentiableInput:
    """``tau**(beta-1) * E^sigma_{alpha,beta}(lam tau**alpha)`` and its derivative.

    The derivative uses ``d/dt [t^(b-1) E^s_{a,b}(l t^a)] = t^(b-2) E^s_{a,b-1}(l t^a)``,
    so ``beta > 1`` is required.
    """
    if not beta > 1.0:
        raise DomainError("analytic derivative needs beta > 1")
    value = MLParams(alpha, beta, sigma)
    deriv = MLParams(alpha, beta - 1.0, sigma)

    def f(t: float) -> float:
        return t ** (beta - 1.0) * ml3(value, lam * t**alpha) if t > 0 else (1.0 if beta == 1.0 else 0.0)

    def df(t: float) -> float:
        if t == 0.0:
            if beta == 2.0:
                return ml3(deriv, 0.0)
            return 0.0 if beta > 2.0 else math.inf
        return t ** (beta - 2.0) * ml3(deriv, lam * t**alpha)

    return DifferentiableInput(f, df)


def prabhakar_derivative_closed_form(
    alpha: float | FractionalOrder,
    beta: float,
    sigma: float,
    B: Normalization,
    tau: float,
) -> float:
    """Closed-form ABC derivative of ``tau**(beta-1) E^sigma_{a,beta}(-c tau**a)``.

    Returns ``B/(1-a) tau**(beta-1) E^{1+sigma}_{a,beta}(-c tau**a)`` with
    ``c = a/(1-a)``. For ``beta > 1`` this is exact; at ``beta = 1`` the
    function does not vanish at the origin and the true derivative is smaller
    by ``B/(1-a) E_a(-c tau**a)``.
    """
    a = as_alpha(alpha)
    if not beta >= 1.0:
        raise DomainError(f"beta must be >= 1, got {beta}")
    if not sigma >= 0.0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if not tau >= 0.0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    lam = -a / (1.0 - a)
    scale = B(a) / (1.0 - a)
    if tau == 0.0:
        return scale * ml3(MLParams(a, beta, 1.0 + sigma), 0.0) if beta == 1.0 else 0.0
    return scale * tau ** (beta - 1.0) * ml3(MLParams(a, beta, 1.0 + sigma), lam * tau**a)


def ml_growth_derivative(alpha: float | FractionalOrder, B: Normalization, tau: float) -> float:
    """Exact ABC derivative of ``E_a(tau**a)``: ``B * (E_a(tau**a) - E_a(-c tau**a))``.

    Follows from Laplace transforms; ``E_a(tau**a)`` has an integrable
    ``tau**(a-1)`` derivative singularity at 0, so the trapezoidal
    :func:`abc_derivative` does not apply to it.
    """
    a = as_alpha(alpha)
    if not tau >= 0.0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    c = a / (1.0 - a)
    x = tau**a
    return B(a) * (ml1(a, x) - ml1(a, -c * x))


def ml_growth_derivative_quadrature(
    alpha: float | FractionalOrder, B: Normalization, tau: float, tol: float = 1e-11
) -> float:
    """Same quantity by direct quadrature of the defining integral.

    With ``sigma = u**(1/a)`` the derivative ``sigma**(a-1) E_{a,a}(sigma**a)`` turns
    into the bounded ``E_{a,a}(u) / a``, leaving a smooth integrand on ``[0, tau**a]``.
    """
    a = as_alpha(alpha)
    if tau == 0.0:
        return 0.0
    c = a / (1.0 - a)
    inv = 1.0 / a

    def integrand(u: float) -> float:
        lag = max(tau - u**inv, 0.0)
        return ml1(a, -c * lag**a) * ml2(a, a, u) / a

    value, _ = quadrature.integrate(integrand, 0.0, tau**a, abs_tol=tol, rel_tol=tol)
    return B(a) / (1.0 - a) * value
