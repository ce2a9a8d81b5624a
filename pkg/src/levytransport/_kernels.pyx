# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``.

Only polynomial drifts are compiled; callables stay on the Python path.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs, ceil, INFINITY

cnp.import_array()

cdef double OVERFLOW = 1e12


def t1_empirical_pareto_sum(const double[::1] xi, double alpha, double lam):
    cdef Py_ssize_t n = xi.shape[0]
    cdef Py_ssize_t i
    cdef double scale = alpha / lam
    cdef double coef = pow(lam / alpha, 1.0 / alpha)
    cdef double r = 1.0 / alpha - 1.0
    cdef double lo, hi, x, km, k0, kp, total = 0.0
    for i in range(n):
        lo = n / (n - (i + 1) + 1.0)
        hi = n / <double>(n - (i + 1)) if i + 1 < n else INFINITY
        x = xi[i]
        km = _clamp(scale * pow(_pos(x - 1.0), alpha), lo, hi)
        k0 = _clamp(scale * pow(_pos(x), alpha), lo, hi)
        kp = _clamp(scale * pow(_pos(x + 1.0), alpha), lo, hi)
        if km == kp:
            # all three clamp to one point: the term is exactly zero
            continue
        total += (_q(coef, r, x, km) + _q(coef, r, x, kp) - 2.0 * _q(coef, r, x, k0)
                  + 1.0 / kp - 1.0 / km)
    return total


cdef inline double _pos(double x) nogil:
    return x if x > 0.0 else 0.0


cdef inline double _clamp(double k, double lo, double hi) nogil:
    if k < lo:
        k = lo
    if k > hi:
        k = hi
    return k


cdef inline double _q(double coef, double r, double c, double x) nogil:
    return coef * pow(x, r) / r + c / x


cdef inline double _poly(const double[::1] c, double x) nogil:
    cdef Py_ssize_t k = c.shape[0] - 1
    cdef double acc = 0.0
    while k >= 0:
        acc = acc * x + c[k]
        k -= 1
    return acc


cdef inline Py_ssize_t _nsteps(double duration, double dt) nogil:
    cdef Py_ssize_t n = <Py_ssize_t>ceil(duration / dt - 1e-9)
    return n if n > 1 else 1


def flow(const double[::1] coeffs, double x, double duration, double dt):
    if duration <= 0:
        return x, -1
    cdef Py_ssize_t n = _nsteps(duration, dt)
    cdef double h = duration / n
    cdef double xm
    cdef Py_ssize_t k, blow = -1
    with nogil:
        for k in range(n):
            xm = x + 0.5 * h * _poly(coeffs, x)
            x = x + h * _poly(coeffs, xm)
            if not fabs(x) <= OVERFLOW:
                blow = k
                break
    return x, blow


def flow_path(const double[::1] coeffs, double x, double duration, double dt):
    if duration <= 0:
        return np.empty(0), -1
    cdef Py_ssize_t n = _nsteps(duration, dt)
    cdef double h = duration / n
    cdef double xm
    cdef Py_ssize_t k
    out = np.empty(n)
    cdef double[::1] o = out
    for k in range(n):
        xm = x + 0.5 * h * _poly(coeffs, x)
        x = x + h * _poly(coeffs, xm)
        o[k] = x
        if not fabs(x) <= OVERFLOW:
            return out[: k + 1], k
    return out, -1


def flow_pair(const double[::1] c1, const double[::1] c2, double x1, double x2,
              double duration, double dt):
    cdef double gap = 0.0
    if duration <= 0:
        return x1, x2, gap, -1
    cdef Py_ssize_t n = _nsteps(duration, dt)
    cdef double h = duration / n
    cdef double xm, d
    cdef Py_ssize_t k, blow = -1
    with nogil:
        for k in range(n):
            xm = x1 + 0.5 * h * _poly(c1, x1)
            x1 = x1 + h * _poly(c1, xm)
            xm = x2 + 0.5 * h * _poly(c2, x2)
            x2 = x2 + h * _poly(c2, xm)
            if not (fabs(x1) <= OVERFLOW and fabs(x2) <= OVERFLOW):
                blow = k
                break
            d = fabs(x1 - x2)
            if d > gap:
                gap = d if d < 1.0 else 1.0
    return x1, x2, gap, blow
