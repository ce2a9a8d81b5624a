"""Time the compiled and pure-Python kernels on the workloads that dominate runtime.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the best-of-``repeat`` time for each backend
and the speedup.  Both backends are checked to agree before timing.
"""

import argparse
import timeit

import numpy as np

from levytransport import kernels
from levytransport.jumpsde import JumpDiffusionSpec, Regimes, coupled_sup_rho, draw_marks
from levytransport.sampling import sample_pareto


def workloads():
    xs = sample_pareto(3.0, 0.5, 10_000, 1)
    small = sample_pareto(3.0, 0.5, 100, 1)
    drift = [0.2, -1.0, 0.0, -0.1]
    spec1 = JumpDiffusionSpec(drift=drift, alpha_plus=Regimes(3.5, 3.0), alpha_minus=Regimes(3.5, 3.0))
    spec2 = JumpDiffusionSpec(drift=drift, alpha_plus=Regimes(3.7, 3.0), alpha_minus=Regimes(3.5, 3.0))
    marks = draw_marks(spec1, 10.0, 2)
    return {
        "t1 sum, n=100": lambda b: kernels.t1_empirical_pareto_sum(small, 3.0, 3.0 * 0.5**3, backend=b),
        "t1 sum, n=1e4": lambda b: kernels.t1_empirical_pareto_sum(xs, 3.0, 3.0 * 0.5**3, backend=b),
        "flow, 1e4 steps": lambda b: kernels.flow(drift, 0.5, 1.0, 1e-4, backend=b)[0],
        "flow_pair, 1e4 steps": lambda b: kernels.flow_pair(drift, drift[::-1], 0.5, 0.1, 1.0, 1e-4, backend=b)[2],
        "coupled path, T=10": lambda b: coupled_sup_rho(spec1, spec2, 10.0, 1e-3, marks=marks, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the python backend is available")
    print(f"{'kernel':<24}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in workloads().items():
        results = [fn(b) for b in backends]
        assert np.allclose(results, results[0], rtol=1e-10, atol=1e-12), (name, results)
        times = [min(timeit.repeat(lambda b=b: fn(b), number=20, repeat=args.repeat)) for b in backends]
        row = f"{name:<24}" + "".join(f"{t / 20 * 1e3:>10.4f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
