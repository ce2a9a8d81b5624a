"""Backend selection for the hot kernels.

The compiled ``_kernels`` extension is used when it was built and
``LEVYTRANSPORT_PURE_PYTHON`` is unset; otherwise the ``_pykernels``
fallback.  Callable drifts always run on the Python path.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_compiled = None
if not os.environ.get("LEVYTRANSPORT_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None


def available_backends():
    return ["python", "cython"] if _compiled is not None else ["python"]


def _impl(backend):
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    return _pykernels


# above this sample size numpy's vectorised pow beats the scalar compiled loop
T1_COMPILED_MAX_N = 600


def t1_empirical_pareto_sum(xi, alpha, lam, backend=None):
    xi = np.ascontiguousarray(xi, dtype=float)
    if backend is None and xi.size > T1_COMPILED_MAX_N:
        backend = "python"
    return float(_impl(backend).t1_empirical_pareto_sum(xi, float(alpha), float(lam)))


def _coeffs(drift):
    return np.ascontiguousarray(drift, dtype=float)


def flow(drift, x, duration, dt, backend=None):
    if callable(drift):
        return _pykernels.flow(drift, float(x), float(duration), float(dt))
    return _impl(backend).flow(_coeffs(drift), float(x), float(duration), float(dt))


def flow_path(drift, x, duration, dt, backend=None):
    if callable(drift):
        return _pykernels.flow_path(drift, float(x), float(duration), float(dt))
    return _impl(backend).flow_path(_coeffs(drift), float(x), float(duration), float(dt))


def flow_pair(drift1, drift2, x1, x2, duration, dt, backend=None):
    args = (float(x1), float(x2), float(duration), float(dt))
    if callable(drift1) or callable(drift2):
        return _pykernels.flow_pair(drift1, drift2, *args)
    return _impl(backend).flow_pair(_coeffs(drift1), _coeffs(drift2), *args)
