"""Bessel functions J_m of the first kind and their first positive zeros.

Supported orders are the half-integers -1/2 and 1/2 (closed trigonometric
forms) and the integers 0..5.  First zeros are located by sign-change
bracketing followed by bisection, so every returned zero carries a bracket
certificate and a residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["BesselZero", "bessel_j", "first_zero", "SUPPORTED_ORDERS"]

_HALF_ORDERS = (-0.5, 0.5)
_INT_ORDERS = tuple(range(6))
SUPPORTED_ORDERS = _HALF_ORDERS + _INT_ORDERS

_SERIES_CUTOFF = 12.0  # ascending series below, downward recurrence above
_SCAN_STEP = 0.1
_SCAN_MAX = 30.0
_BISECT_WIDTH = 1e-14


@dataclass(frozen=True)
class BesselZero:
    """First positive zero of J_m with its bracket certificate."""

    order: float
    value: float
    residual: float
    bracket: tuple


def _check_order(order: float) -> float:
    order = float(order)
    if order not in SUPPORTED_ORDERS:
        raise ValueError(
            f"unsupported order {order}; supported: {sorted(SUPPORTED_ORDERS)}"
        )
    return order


def _j_series(m: int, x: float) -> float:
    # ascending series sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!); converges for
    # all x, used only below the cutoff where cancellation stays harmless
    half = x / 2.0
    term = half**m / math.factorial(m)
    total = term
    k = 0
    while abs(term) > 1e-18 * (abs(total) + 1.0) and k < 200:
        k += 1
        term *= -(half * half) / (k * (k + m))
        total += term
    return total


def _j_recurrence(m_want: int, x: float) -> float:
    # Miller's downward recurrence, normalized by J_0 + 2*sum J_2k = 1;
    # near machine precision for the moderate x used here
    start = int(x + 20 + 6.0 * math.sqrt(x))
    if start % 2:
        start += 1
    jp, j = 0.0, 1e-30
    norm = 0.0
    wanted = 0.0
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * j - jp
        jp, j = j, jm
        if abs(j) > 1e250:
            j *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            if k - 1 <= m_want:
                wanted *= 1e-250
        if k - 1 == m_want:
            wanted = j
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
    norm += j
    return wanted / norm


def bessel_j(order: float, x: float) -> float:
    """Evaluate J_order(x) for x >= 0.

    Half-integer orders use their trigonometric closed forms; integer orders
    use the ascending series for x <= 12 and a normalized downward
    recurrence beyond.  Absolute error stays below 1e-12 for 0 <= x <= 50.
    """
    order = _check_order(order)
    x = float(x)
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if order == -0.5:
        if x == 0.0:
            return math.inf
        return math.sqrt(2.0 / (math.pi * x)) * math.cos(x)
    if order == 0.5:
        if x == 0.0:
            return 0.0
        return math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
    m = int(order)
    if x == 0.0:
        return 1.0 if m == 0 else 0.0
    if x <= _SERIES_CUTOFF:
        return _j_series(m, x)
    return _j_recurrence(m, x)


def first_zero(order: float) -> BesselZero:
    """Locate the smallest positive zero of J_order.

    Scans upward from 0 in steps of 0.1 for a sign change, then bisects the
    bracket down to width 1e-14.
    """
    order = _check_order(order)
    lo = _SCAN_STEP
    f_lo = bessel_j(order, lo)
    hi = lo
    while hi < _SCAN_MAX:
        hi = hi + _SCAN_STEP
        f_hi = bessel_j(order, hi)
        if f_lo == 0.0:
            # scan point is itself a root; nudge the bracket around it
            lo, hi = lo - 0.5 * _SCAN_STEP, lo + 0.5 * _SCAN_STEP
            break
        if f_lo * f_hi < 0.0:
            break
        lo, f_lo = hi, f_hi
    else:
        raise ValueError(f"no sign change of J_{order} found in (0, {_SCAN_MAX}]")

    bracket = (lo, hi)
    a, b = lo, hi
    f_a = bessel_j(order, a)
    while b - a > _BISECT_WIDTH:
        mid = 0.5 * (a + b)
        f_mid = bessel_j(order, mid)
        if f_mid == 0.0:
            a = b = mid
            break
        if f_a * f_mid < 0.0:
            b = mid
        else:
            a, f_a = mid, f_mid
    root = 0.5 * (a + b)
    return BesselZero(
        order=order,
        value=root,
        residual=abs(bessel_j(order, root)),
        bracket=bracket,
    )
