r"""Mittag-Leffler functions and the spectral density of :math:`E_\alpha(-t^\alpha)`.

Two independent evaluation routes are provided:

* the power series :math:`\sum_k (\gamma)_k z^k / (\Gamma(\alpha k+\beta)\,k!)`,
  valid for every real argument but subject to cancellation for large
  negative arguments;
* the Laplace-type representation
  :math:`E_\alpha(-\tau^\alpha) = \int_0^\infty e^{-r\tau} K_\alpha(r)\,dr`,
  valid for :math:`0<\alpha<1`, :math:`\tau \ge 0`.

:func:`ml1` hands negative arguments to the second route when the first
one would lose too many digits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import quadrature
from .errors import DomainError, NonConvergence

log = logging.getLogger(__name__)

__all__ = [
    "MLParams",
    "SeriesControl",
    "ml1",
    "ml2",
    "ml3",
    "ml_series",
    "ml_neg_spectral",
    "spectral_kernel",
    "pochhammer",
]

_GAMMA_DIRECT_LIMIT = 170.0


@dataclass(frozen=True)
class MLParams:
    """Parameters ``(alpha, beta, gamma)`` of the three-parameter function."""

    alpha: float
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 2.0) or not math.isfinite(self.alpha):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not self.beta > 0.0 or not math.isfinite(self.beta):
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.gamma >= 0.0 or not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule for the power series.

    The series stops once ``consecutive_small`` successive terms are below
    ``rel_tol`` times the partial sum, but never before ``k_min`` terms.
    """

    rel_tol: float = 1e-14
    k_min: int = 8
    k_max: int = 2000
    consecutive_small: int = 3

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")
        if not self.k_min < self.k_max:
            raise DomainError("k_min must be smaller than k_max")
        if self.consecutive_small < 1:
            raise DomainError("consecutive_small must be at least 1")


DEFAULT_CONTROL = SeriesControl()


def pochhammer(g: float, k: int) -> float:
    """Rising factorial ``g (g+1) ... (g+k-1)``, with ``(g)_0 = 1``."""
    out = 1.0
    for i in range(k):
        out *= g + i
    return out


def _term(z: float, k: int, alpha: float, beta: float, log_coef: float, coef: float) -> float:
    """``coef * z**k / Gamma(alpha*k + beta)``; ``log_coef = log(coef)``."""
    arg = alpha * k + beta
    if arg < _GAMMA_DIRECT_LIMIT and math.isfinite(coef):
        try:
            power = z**k
        except OverflowError:
            power = math.inf
        if math.isfinite(power):
            return coef * power / math.gamma(arg)
    if z == 0.0:
        return 0.0
    logmag = log_coef + k * math.log(abs(z)) - math.lgamma(arg)
    if logmag > 709.0:
        raise NonConvergence(f"series term overflows at k={k} for z={z}")
    mag = math.exp(logmag)
    return -mag if (z < 0 and k % 2) else mag


def ml_series(
    params: MLParams, z: float, ctrl: SeriesControl = DEFAULT_CONTROL
) -> tuple[float, float]:
    """Sum the three-parameter series and report the largest term magnitude.

    The ratio ``max_term / |value|`` measures how many digits the
    alternating sum lost to cancellation.
    """
    alpha, beta, g = params.alpha, params.beta, params.gamma
    if not math.isfinite(z):
        raise DomainError(f"argument must be finite, got {z}")
    terms = []
    partial = 0.0
    max_term = 0.0
    small = 0
    coef = 1.0  # (g)_k / k!
    log_coef = 0.0
    for k in range(ctrl.k_max + 1):
        if k > 0:
            factor = (g + k - 1) / k
            coef *= factor
            log_coef = log_coef + math.log(factor) if factor > 0 else -math.inf
        if coef == 0.0 and k > 0:
            # nonpositive-integer gamma: the series is a finite sum
            break
        t = _term(z, k, alpha, beta, log_coef, coef)
        terms.append(t)
        partial += t
        max_term = max(max_term, abs(t))
        if abs(t) <= ctrl.rel_tol * abs(partial):
            small += 1
        else:
            small = 0
        if k >= ctrl.k_min and small >= ctrl.consecutive_small:
            break
    else:
        raise NonConvergence(
            f"series for E(alpha={alpha}, beta={beta}, gamma={g}) at z={z} "
            f"did not meet rel_tol={ctrl.rel_tol} within k_max={ctrl.k_max}"
        )
    return math.fsum(terms), max_term


def ml3(params: MLParams, z: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Three-parameter (Prabhakar) Mittag-Leffler function by its series."""
    return ml_series(params, z, ctrl)[0]


def ml2(alpha: float, beta: float, z: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Two-parameter Mittag-Leffler function ``E_{alpha,beta}(z)``."""
    return ml_series(MLParams(alpha, beta, 1.0), z, ctrl)[0]


def ml1(
    alpha: float,
    z: float,
    ctrl: SeriesControl = DEFAULT_CONTROL,
    *,
    neg_threshold: float = 5.0,
    max_cancellation: float = 1e4,
    quad_tol: float = 1e-13,
) -> float:
    """One-parameter Mittag-Leffler function ``E_alpha(z)``.

    For ``0 < alpha < 1`` and ``z < 0`` the spectral route is used when
    ``|z| > neg_threshold``, when the expected cancellation ``exp(|z|**(1/alpha))``
    exceeds ``max_cancellation``, or when the series turns out to have lost
    more than ``log10(max_cancellation)`` digits.
    """
    params = MLParams(alpha, 1.0, 1.0)
    if z < 0.0 and alpha < 1.0:
        tau = (-z) ** (1.0 / alpha)
        # the largest series term is roughly exp(tau)
        if -z > neg_threshold or tau > math.log(max_cancellation):
            return ml_neg_spectral(alpha, tau, quad_tol)
        try:
            value, max_term = ml_series(params, z, ctrl)
        except NonConvergence:
            return ml_neg_spectral(alpha, tau, quad_tol)
        if max_term > max_cancellation * abs(value):
            log.debug("series cancellation %.2e at z=%g; using spectral route", max_term / abs(value), z)
            return ml_neg_spectral(alpha, tau, quad_tol)
        return value
    return ml_series(params, z, ctrl)[0]


def _check_spectral_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"spectral representation needs 0 < alpha < 1, got {alpha}")


def spectral_kernel(alpha: float, r: float) -> float:
    r"""Density :math:`K_\alpha(r)` with :math:`E_\alpha(-\tau^\alpha)=\int_0^\infty e^{-r\tau}K_\alpha(r)dr`."""
    _check_spectral_alpha(alpha)
    if not r > 0.0:
        raise DomainError(f"spectral kernel is defined for r > 0, got {r}")
    theta = alpha * math.pi
    ra = r**alpha
    return r ** (alpha - 1.0) * math.sin(theta) / (math.pi * (ra * ra + 2.0 * ra * math.cos(theta) + 1.0))


def ml_neg_spectral(alpha: float, tau: float, quad_tol: float = 1e-13) -> float:
    r"""``E_alpha(-tau**alpha)`` from the Laplace integral of the spectral kernel.

    The integral is split at ``r = 1``; the tail is mapped back onto
    ``(0, 1]`` with ``r = 1/s`` (``K(1/s)/s^2 = K(s)``), and both pieces use
    ``s = u**(1/alpha)``, which removes the ``s**(alpha-1)`` endpoint
    singularity and leaves the smooth weight
    ``sin(pi alpha) / (pi alpha (1 + 2u cos(pi alpha) + u^2))`` on ``[0, 1]``.
    """
    _check_spectral_alpha(alpha)
    if not tau >= 0.0 or not math.isfinite(tau):
        raise DomainError(f"tau must be finite and non-negative, got {tau}")
    if tau == 0.0:
        return 1.0
    theta = alpha * math.pi
    scale = math.sin(theta) / (math.pi * alpha)
    cos_t = math.cos(theta)
    inv = 1.0 / alpha

    def weight(u: float) -> float:
        return scale / (1.0 + 2.0 * u * cos_t + u * u)

    def head(u: float) -> float:
        return math.exp(-tau * u**inv) * weight(u)

    def tail(u: float) -> float:
        if u == 0.0:
            return 0.0
        exponent = tau * u ** (-inv)
        return math.exp(-exponent) * weight(u) if exponent < 745.0 else 0.0

    near, _ = quadrature.integrate(head, 0.0, 1.0, abs_tol=0.5 * quad_tol, rel_tol=quad_tol)
    far, _ = quadrature.integrate(tail, 0.0, 1.0, abs_tol=0.5 * quad_tol, rel_tol=quad_tol)
    return near + far
