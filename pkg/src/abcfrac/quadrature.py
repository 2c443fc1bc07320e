"""Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval."""

from __future__ import annotations

import heapq
import math
from typing import Callable

from .errors import QuadratureFailure

# Kronrod abscissae on [0, 1) in decreasing order; odd indices are the Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Single 15-point Kronrod estimate and |K15 - G7| on ``[a, b]``."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    kronrod = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        dx = half * _XGK[i]
        pair = f(center - dx) + f(center + dx)
        kronrod += _WGK[i] * pair
        if i % 2 == 1:
            gauss += _WG[i // 2] * pair
    return kronrod * half, abs((kronrod - gauss) * half)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-13,
    rel_tol: float = 1e-13,
    max_intervals: int = 2000,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, b]`` by repeatedly bisecting the worst interval.

    Returns ``(value, error_estimate)``. Raises QuadratureFailure when the
    interval budget runs out before ``error <= max(abs_tol, rel_tol*|value|)``.
    """
    if a == b:
        return 0.0, 0.0
    value, err = gk15(f, a, b)
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= max_intervals:
            raise QuadratureFailure(
                f"budget of {max_intervals} intervals exhausted on [{a}, {b}]; "
                f"error estimate {total_err:.3e}"
            )
        neg_err, lo, hi, piece = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureFailure(f"interval [{lo}, {hi}] cannot be bisected further")
        left, left_err = gk15(f, lo, mid)
        right, right_err = gk15(f, mid, hi)
        total += left + right - piece
        total_err += left_err + right_err + neg_err
        heapq.heappush(heap, (-left_err, lo, mid, left))
        heapq.heappush(heap, (-right_err, mid, hi, right))
    # re-sum to shed the drift from incremental updates
    value = math.fsum(item[3] for item in heap)
    return value, total_err
