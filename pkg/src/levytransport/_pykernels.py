"""Pure-Python reference versions of the hot kernels.

``_kernels.pyx`` mirrors these function by function with the same
floating-point operation order, so both backends agree to rounding.
"""

import math

import numpy as np

OVERFLOW = 1e12


def t1_empirical_pareto_sum(xi, alpha, lam):
    """Sum over atoms of the per-interval terms of the empirical-vs-Pareto ``T_1``.

    ``xi`` is the sorted sample.  The constant 1 from the telescoping
    ``1/a_i - 1/b_i`` terms is not included.
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    i = np.arange(1, n + 1, dtype=float)
    lo = n / (n - i + 1.0)
    with np.errstate(divide="ignore"):
        hi = np.where(i < n, n / (n - i), np.inf)
    scale = alpha / lam
    coef = (lam / alpha) ** (1.0 / alpha)
    r = 1.0 / alpha - 1.0

    def kappa(shift):
        base = np.maximum(xi + shift, 0.0)
        return np.minimum(np.maximum(lo, scale * base**alpha), hi)

    def q(x):
        return coef * x**r / r + xi / x

    km = kappa(-1.0)
    k0 = kappa(0.0)
    kp = kappa(1.0)
    terms = q(km) + q(kp) - 2.0 * q(k0) + 1.0 / kp - 1.0 / km
    return float(np.sum(terms))


def _poly(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _steps(duration, dt):
    n = int(math.ceil(duration / dt - 1e-9))
    n = max(n, 1)
    return n, duration / n


def flow(drift, x, duration, dt):
    """Explicit midpoint integration of ``x' = drift(x)`` over ``duration``.

    ``drift`` is either a coefficient sequence (ascending powers) or a
    callable.  Returns ``(x_end, blow_step)`` with ``blow_step = -1`` unless
    ``|x|`` exceeded the overflow guard.
    """
    if duration <= 0:
        return x, -1
    f = drift if callable(drift) else (lambda y, c=tuple(drift): _poly(c, y))
    n, h = _steps(duration, dt)
    for k in range(n):
        xm = x + 0.5 * h * f(x)
        x = x + h * f(xm)
        if not abs(x) <= OVERFLOW:
            return x, k
    return x, -1


def flow_path(drift, x, duration, dt):
    """Like :func:`flow` but returns the state after every step."""
    if duration <= 0:
        return np.empty(0), -1
    f = drift if callable(drift) else (lambda y, c=tuple(drift): _poly(c, y))
    n, h = _steps(duration, dt)
    out = np.empty(n)
    for k in range(n):
        xm = x + 0.5 * h * f(x)
        x = x + h * f(xm)
        out[k] = x
        if not abs(x) <= OVERFLOW:
            return out[: k + 1], k
    return out, -1


def flow_pair(drift1, drift2, x1, x2, duration, dt):
    """Integrate two flows on a common grid.

    Returns ``(x1, x2, sup_gap, blow_step)`` where ``sup_gap`` is the largest
    ``min(|x1 - x2|, 1)`` over the step ends.
    """
    gap = 0.0
    if duration <= 0:
        return x1, x2, gap, -1
    f1 = drift1 if callable(drift1) else (lambda y, c=tuple(drift1): _poly(c, y))
    f2 = drift2 if callable(drift2) else (lambda y, c=tuple(drift2): _poly(c, y))
    n, h = _steps(duration, dt)
    for k in range(n):
        xm = x1 + 0.5 * h * f1(x1)
        x1 = x1 + h * f1(xm)
        xm = x2 + 0.5 * h * f2(x2)
        x2 = x2 + h * f2(xm)
        if not (abs(x1) <= OVERFLOW and abs(x2) <= OVERFLOW):
            return x1, x2, gap, k
        d = abs(x1 - x2)
        if d > gap:
            gap = d if d < 1.0 else 1.0
    return x1, x2, gap, -1
