import os
import subprocess
import sys

import numpy as np
import pytest

from levytransport import kernels
from levytransport.sampling import sample_pareto

compiled = pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")


@compiled
@pytest.mark.parametrize("alpha", [1.5, 3.0, 7.0])
def test_t1_sum_backends_agree(alpha):
    xs = sample_pareto(alpha, 0.5, 500, 3)
    lam = alpha * 0.5**alpha
    a = kernels.t1_empirical_pareto_sum(xs, alpha, lam, backend="python")
    b = kernels.t1_empirical_pareto_sum(xs, alpha, lam, backend="cython")
    assert a == pytest.approx(b, rel=1e-12, abs=1e-13)


@compiled
def test_flow_backends_agree():
    drift = [0.3, -1.0, 0.0, -0.2]
    for x in (-2.0, 0.0, 1.5):
        a = kernels.flow(drift, x, 0.73, 0.01, backend="python")
        b = kernels.flow(drift, x, 0.73, 0.01, backend="cython")
        assert a[0] == pytest.approx(b[0], abs=1e-14) and a[1] == b[1]
    pa = kernels.flow_path(drift, 0.5, 0.2, 0.01, backend="python")[0]
    pb = kernels.flow_path(drift, 0.5, 0.2, 0.01, backend="cython")[0]
    np.testing.assert_allclose(pa, pb, atol=1e-14)
    qa = kernels.flow_pair(drift, [0.0, -1.0], 1.0, 0.2, 1.0, 0.01, backend="python")
    qb = kernels.flow_pair(drift, [0.0, -1.0], 1.0, 0.2, 1.0, 0.01, backend="cython")
    np.testing.assert_allclose(qa, qb, atol=1e-14)


def test_flow_linear_decay():
    # x' = -x: the midpoint rule converges at second order
    x, blow = kernels.flow([0.0, -1.0], 1.0, 1.0, 1e-3, backend="python")
    assert blow == -1
    assert x == pytest.approx(np.exp(-1.0), abs=1e-6)


def test_overflow_guard():
    x, blow = kernels.flow([0.0, 0.0, 1.0], 1.0, 2.0, 1e-3, backend="python")
    assert blow >= 0 and not abs(x) <= 1e12


def test_callable_drift():
    x, _ = kernels.flow(lambda y: -y, 1.0, 1.0, 1e-3)
    assert x == pytest.approx(np.exp(-1.0), abs=1e-6)


def test_env_var_forces_python():
    env = dict(os.environ, LEVYTRANSPORT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from levytransport import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_unknown_compiled_request():
    if "cython" in kernels.available_backends():
        pytest.skip("extension present")
    with pytest.raises(RuntimeError):
        kernels.flow([0.0], 0.0, 1.0, 0.1, backend="cython")


def test_large_samples_use_numpy_path():
    xs = sample_pareto(3.0, 0.5, kernels.T1_COMPILED_MAX_N + 1, 4)
    assert kernels.t1_empirical_pareto_sum(xs, 3.0, 0.375) == kernels.t1_empirical_pareto_sum(
        xs, 3.0, 0.375, backend="python"
    )
