"""Finite-intensity jump diffusions with a regime-dependent power-law kernel.

The process solves ``dX = a(X) dt + int c(X(t-), v) nu0(dt, dv)`` where the
kernel is a Pareto law on each side whose exponent depends on the state:

    alpha(x) = alpha_cold                      for x <= s* - delta
               linear interpolation            on [s* - delta, s* + delta]
               alpha_warm                      for x >= s* + delta

Each side has a fixed mass, so the jump intensity does not depend on the
state and event times are exact exponential clocks.  A jump of side ``s``
with uniform mark ``U`` has size ``s * eps_s * U**(-1/alpha_s(X(t-)))``; the
equivalent Cauchy coordinate is ``v = s / (m_s U)``.
"""

from __future__ import annotations

import csv
import json
import math
import pathlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .distance import power_pair_integral, tp_quadrature
from .errors import BlowUpError, CouplingError, IncompleteInputError, ValidationError
from .measures import ParetoTail, transport
from .sampling import RngStream, _generator, uniform_open0

OVERFLOW = kernels._pykernels.OVERFLOW
Drift = Union[Sequence[float], Callable[[float], float]]


def G(x):
    """``max(sqrt(x), x)``."""
    x = float(x)
    if x < 0:
        raise ValidationError("G is defined for non-negative arguments")
    return max(math.sqrt(x), x)


def rho(x, y):
    return min(abs(x - y), 1.0)


@dataclass(frozen=True)
class Regimes:
    """Exponent profile with plateaus ``cold`` (below ``s_star - delta``) and ``warm`` (above ``s_star + delta``)."""

    warm: float
    cold: float
    s_star: float = -0.8
    delta: float = 0.1

    def __post_init__(self):
        if not self.delta > 0:
            raise ValidationError("interpolation half-width delta must be positive")
        for name in ("warm", "cold"):
            if not getattr(self, name) >= 2:
                raise ValidationError(f"exponent plateau {name}={getattr(self, name)} is below 2")

    def __call__(self, x):
        lo = self.s_star - self.delta
        hi = self.s_star + self.delta
        if x <= lo:
            return self.cold
        if x >= hi:
            return self.warm
        return self.cold + (self.warm - self.cold) * (x - lo) / (hi - lo)

    @property
    def lipschitz(self):
        return abs(self.warm - self.cold) / (2 * self.delta)


@dataclass(frozen=True)
class JumpDiffusionSpec:
    """Drift, kernel and initial value of a jump diffusion.

    Parameters
    ----------
    drift : sequence of float or callable
        Polynomial coefficients in ascending powers, or ``x -> a(x)``.
        Only coefficient drifts run on the compiled backend.
    alpha_plus, alpha_minus : Regimes
        Exponent profiles of the positive and negative jumps.
    eps_plus, eps_minus : float or None
        Jump thresholds; ``eps_minus=None`` gives a one-sided kernel.
    mass_plus, mass_minus : float
        Side masses (1 is probability normalisation).
    """

    drift: Drift
    alpha_plus: Regimes
    alpha_minus: Regimes | None = None
    eps_plus: float = 0.36
    eps_minus: float | None = 0.34
    mass_plus: float = 1.0
    mass_minus: float = 1.0
    x0: float = 0.0
    lipschitz: float | None = None

    def __post_init__(self):
        if not callable(self.drift):
            coeffs = tuple(float(c) for c in self.drift)
            if not coeffs:
                raise ValidationError("drift needs at least one coefficient")
            object.__setattr__(self, "drift", coeffs)
        if not (self.eps_plus > 0 and self.mass_plus > 0):
            raise ValidationError("eps_plus and mass_plus must be positive")
        if self.eps_minus is not None:
            if self.alpha_minus is None:
                raise ValidationError("two-sided kernel needs alpha_minus")
            if not (self.eps_minus > 0 and self.mass_minus > 0):
                raise ValidationError("eps_minus and mass_minus must be positive")
        if not math.isfinite(self.x0):
            raise ValidationError("x0 must be finite")

    @property
    def two_sided(self):
        return self.eps_minus is not None

    @property
    def intensity(self):
        return self.mass_plus + (self.mass_minus if self.two_sided else 0.0)

    def drift_at(self, x):
        if callable(self.drift):
            return float(self.drift(x))
        return kernels._pykernels._poly(self.drift, x)

    def side(self, s):
        """``(eps, mass, regimes)`` of side ``s`` in {+1, -1}."""
        if s > 0:
            return self.eps_plus, self.mass_plus, self.alpha_plus
        return self.eps_minus, self.mass_minus, self.alpha_minus

    def kernel_at(self, x):
        """One-sided :class:`ParetoTail` measures ``(plus, minus)`` of ``Pi(x, .)``; ``minus`` may be None."""
        a = self.alpha_plus(x)
        plus = ParetoTail(a, self.eps_plus, self.mass_plus * a * self.eps_plus**a)
        if not self.two_sided:
            return plus, None
        a = self.alpha_minus(x)
        return plus, ParetoTail(a, self.eps_minus, self.mass_minus * a * self.eps_minus**a)

    def with_x0(self, x0):
        return JumpDiffusionSpec(**{**self.__dict__, "x0": float(x0)})


def _regimes_from(data, defaults):
    if isinstance(data, (int, float)):
        return Regimes(float(data), float(data), defaults.get("s_star", -0.8), defaults.get("delta", 0.1))
    return Regimes(
        float(data["warm"]),
        float(data["cold"]),
        float(data.get("s_star", defaults.get("s_star", -0.8))),
        float(data.get("delta", defaults.get("delta", 0.1))),
    )


def spec_from_dict(data):
    """Build a :class:`JumpDiffusionSpec` from JSON.

    ``alpha_plus``/``alpha_minus`` are either a number (constant exponent) or
    ``{"warm": .., "cold": ..}``; top-level ``s_star`` and ``delta`` apply to
    both sides.
    """
    try:
        drift = data.get("drift", [0.0])
        if isinstance(drift, (int, float)):
            drift = [drift]
        eps_minus = data.get("eps_minus", 0.34)
        return JumpDiffusionSpec(
            drift=drift,
            alpha_plus=_regimes_from(data["alpha_plus"], data),
            alpha_minus=_regimes_from(data["alpha_minus"], data) if eps_minus is not None else None,
            eps_plus=float(data.get("eps_plus", 0.36)),
            eps_minus=None if eps_minus is None else float(eps_minus),
            mass_plus=float(data.get("mass_plus", 1.0)),
            mass_minus=float(data.get("mass_minus", 1.0)),
            x0=float(data.get("x0", 0.0)),
            lipschitz=data.get("lipschitz"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"invalid jump diffusion spec: {exc}") from None


def spec_to_dict(spec):
    if callable(spec.drift):
        raise ValidationError("callable drifts cannot be serialised")

    def reg(r):
        return {"warm": r.warm, "cold": r.cold, "s_star": r.s_star, "delta": r.delta}

    return {
        "drift": list(spec.drift),
        "alpha_plus": reg(spec.alpha_plus),
        "alpha_minus": reg(spec.alpha_minus) if spec.two_sided else None,
        "eps_plus": spec.eps_plus,
        "eps_minus": spec.eps_minus,
        "mass_plus": spec.mass_plus,
        "mass_minus": spec.mass_minus,
        "x0": spec.x0,
        "lipschitz": spec.lipschitz,
    }


def load_spec(path):
    with pathlib.Path(path).open() as fh:
        try:
            return spec_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


# --------------------------------------------------------------------------
# marks and paths


@dataclass(frozen=True)
class Marks:
    """Event times, sides (+1/-1) and uniform magnitude marks on ``(0, 1]``."""

    times: np.ndarray
    sides: np.ndarray
    u: np.ndarray

    def __len__(self):
        return self.times.size

    def cauchy(self, spec):
        """Cauchy coordinates ``v = side / (mass_side * u)``."""
        mass = np.where(self.sides > 0, spec.mass_plus, spec.mass_minus)
        return self.sides / (mass * self.u)


def draw_marks(spec, T, rng):
    """Poisson event marks on ``[0, T]`` at rate ``spec.intensity``."""
    gen = _generator(rng)
    lam = spec.intensity
    times = []
    t = 0.0
    while True:
        gaps = gen.exponential(1.0 / lam, size=max(8, int(2 * lam * T) + 8))
        for g in gaps:
            t += g
            if t > T:
                break
            times.append(t)
        else:
            continue
        break
    k = len(times)
    if spec.two_sided:
        sides = np.where(gen.random(k) * lam < spec.mass_plus, 1, -1).astype(np.int8)
    else:
        sides = np.ones(k, dtype=np.int8)
    u = uniform_open0(gen, k)
    return Marks(np.array(times), sides, u)


@dataclass
class Path:
    """Sampled trajectory.

    ``times`` is non-decreasing: every jump contributes the pre- and the
    post-jump value at the same time (``jump_flag`` 0 then 1).
    """

    times: np.ndarray
    values: np.ndarray
    jump_flag: np.ndarray
    jumps: list = field(default_factory=list)
    marks: Marks | None = None

    @property
    def final(self):
        return float(self.values[-1])

    def to_csv(self, path):
        with pathlib.Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "value", "jump_flag"])
            for t, x, f in zip(self.times, self.values, self.jump_flag):
                w.writerow([repr(float(t)), repr(float(x)), int(f)])


def jump_size(spec, side, u, x):
    eps, _, reg = spec.side(side)
    return side * eps * u ** (-1.0 / reg(x))


def _check(x, t):
    if not abs(x) <= OVERFLOW:
        raise BlowUpError(t, x)


def simulate(spec, T, dt=None, rng=None, marks=None, backend=None):
    """Simulate one path on ``[0, T]``.

    Parameters
    ----------
    spec : JumpDiffusionSpec
    T : float
        Horizon.
    dt : float, optional
        Drift step; defaults to ``1e-3 * T``.
    rng : RngStream, Generator or seed
        Source of the marks when ``marks`` is not given.
    marks : Marks, optional
        Replays a recorded mark stream.

    Raises
    ------
    BlowUpError
        ``|X|`` left the overflow guard; carries the time.
    """
    T, dt = _horizon(T, dt)
    if marks is None:
        marks = draw_marks(spec, T, rng)
    times, values, flags, jumps = [0.0], [spec.x0], [0], []
    x, t = spec.x0, 0.0
    for tj, side, u in zip(np.append(marks.times, T), np.append(marks.sides, 0), np.append(marks.u, 1.0)):
        seg, blow = kernels.flow_path(spec.drift, x, tj - t, dt, backend)
        if seg.size:
            n = seg.size
            h = (tj - t) / _nsteps(tj - t, dt)
            grid = t + h * np.arange(1, n + 1)
            grid[-1] = tj if blow < 0 else grid[-1]
            times.extend(grid.tolist())
            values.extend(seg.tolist())
            flags.extend([0] * n)
            x = float(seg[-1])
            if blow >= 0:
                raise BlowUpError(float(grid[-1]), x)
        t = tj
        if side == 0:
            break
        size = jump_size(spec, side, u, x)
        mass = spec.mass_plus if side > 0 else spec.mass_minus
        jumps.append((t, side / (mass * u), size))
        x = x + size
        _check(x, t)
        times.append(t)
        values.append(x)
        flags.append(1)
    return Path(np.array(times), np.array(values), np.array(flags, dtype=np.int8), jumps, marks)


def _horizon(T, dt):
    T = float(T)
    if not T > 0:
        raise ValidationError("horizon T must be positive")
    dt = 1e-3 * T if dt is None else float(dt)
    if not (0 < dt <= T):
        raise ValidationError("need 0 < dt <= T")
    return T, dt


def _nsteps(duration, dt):
    return kernels._pykernels._steps(duration, dt)[0]


def _check_coupling(spec1, spec2):
    same = (
        spec1.eps_plus == spec2.eps_plus
        and spec1.eps_minus == spec2.eps_minus
        and spec1.mass_plus == spec2.mass_plus
        and (not spec1.two_sided or spec1.mass_minus == spec2.mass_minus)
    )
    if not same:
        raise CouplingError("coupled specs must share eps and side masses so they can share marks")


def simulate_coupled(spec1, spec2, T, dt=None, rng=None, marks=None, backend=None):
    """Drive two diffusions with one mark stream.

    Returns ``(path1, path2, sup_rho)`` with ``sup_rho`` the largest
    ``min(|X1 - X2|, 1)`` over the common grid.
    """
    _check_coupling(spec1, spec2)
    T, dt = _horizon(T, dt)
    if marks is None:
        marks = draw_marks(spec1, T, rng)
    p1 = simulate(spec1, T, dt, marks=marks, backend=backend)
    p2 = simulate(spec2, T, dt, marks=marks, backend=backend)
    gap = float(np.max(np.minimum(np.abs(p1.values - p2.values), 1.0)))
    return p1, p2, gap


def coupled_sup_rho(spec1, spec2, T, dt=None, rng=None, marks=None, backend=None):
    """``sup_t rho(X1(t), X2(t))`` without recording paths (same grid as :func:`simulate_coupled`)."""
    _check_coupling(spec1, spec2)
    T, dt = _horizon(T, dt)
    if marks is None:
        marks = draw_marks(spec1, T, rng)
    x1, x2, t = spec1.x0, spec2.x0, 0.0
    gap = rho(x1, x2)
    for tj, side, u in zip(np.append(marks.times, T), np.append(marks.sides, 0), np.append(marks.u, 1.0)):
        if tj > t:
            x1, x2, g, blow = kernels.flow_pair(spec1.drift, spec2.drift, x1, x2, tj - t, dt, backend)
            if blow >= 0:
                raise BlowUpError(tj, x1 if not abs(x1) <= OVERFLOW else x2)
            gap = max(gap, g)
        t = tj
        if side == 0:
            break
        x1 = x1 + jump_size(spec1, side, u, x1)
        x2 = x2 + jump_size(spec2, side, u, x2)
        _check(x1, t)
        _check(x2, t)
        gap = max(gap, rho(x1, x2))
    return gap


def coupled_study(spec1, spec2, T, replicates, seed, dt=None, threads=1, bound=False, backend=None):
    """Monte-Carlo mean of ``sup_t rho(X1, X2)`` over independent coupled replicates.

    Replicate ``r`` uses ``RngStream.for_context(seed, "couple", r)``.
    Returns the summary dict ``{replicates, mean_sup_rho, stderr, delta,
    g_of_delta}``; ``delta`` is None unless ``bound`` is set.
    """
    replicates = int(replicates)
    if replicates < 2:
        raise ValidationError("need at least 2 replicates for a standard error")
    _check_coupling(spec1, spec2)

    def one(r):
        return coupled_sup_rho(spec1, spec2, T, dt, RngStream.for_context(seed, "couple", r), backend=backend)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            sups = np.array(list(pool.map(one, range(replicates))))
    else:
        sups = np.array([one(r) for r in range(replicates)])
    mean = float(np.mean(sups))
    stderr = float(np.std(sups, ddof=1) / math.sqrt(replicates))
    out = {"replicates": replicates, "mean_sup_rho": mean, "stderr": stderr, "delta": None, "g_of_delta": None}
    if bound:
        rep = bound_t1(spec1, spec2, spec1.x0, spec2.x0)
        out["delta"] = rep.delta
        out["g_of_delta"] = rep.g_of_delta
    return out


# --------------------------------------------------------------------------
# bound quantities


@dataclass(frozen=True)
class BoundReport:
    delta: float
    g_of_delta: float
    metric: str

    def to_dict(self):
        return {"delta": self.delta, "g_of_delta": self.g_of_delta, "metric": self.metric}


def _side_t1(k1, k2):
    """``T_1`` of two one-sided Pareto kernels (or None for an absent side)."""
    if k1 is None and k2 is None:
        return 0.0
    if k1 is None or k2 is None:
        raise CouplingError("one kernel is one-sided and the other is not")
    if k1.alpha == k2.alpha and k1.eps == k2.eps and k1.lam == k2.lam:
        return 0.0
    if k1.eps == k2.eps and k1.lam / (k1.alpha * k1.eps**k1.alpha) == k2.lam / (k2.alpha * k2.eps**k2.alpha):
        # equal eps and mass m: c_i(v) = eps (m v)**(1/alpha_i) from v = 1/m on
        m = k1.lam / (k1.alpha * k1.eps**k1.alpha)
        return power_pair_integral(
            k1.eps * m ** (1 / k1.alpha), 1 / k1.alpha, k2.eps * m ** (1 / k2.alpha), 1 / k2.alpha, 1 / m
        )
    return tp_quadrature(transport(k1), transport(k2)).value


def kernel_t1(spec1, spec2, x):
    """``T_1(Pi_1(x, .), Pi_2(x, .))``; the two sides add up."""
    p1, m1 = spec1.kernel_at(x)
    p2, m2 = spec2.kernel_at(x)
    return _side_t1(p1, p2) + _side_t1(m1, m2)


def bound_grid(spec1, spec2, points=41):
    """x-grid covering both plateaus and the interpolation bands of both specs."""
    pts = []
    for spec in (spec1, spec2):
        for reg in (spec.alpha_plus, spec.alpha_minus):
            if reg is None:
                continue
            lo, hi = reg.s_star - reg.delta, reg.s_star + reg.delta
            pts.extend(np.linspace(lo, hi, points).tolist())
            pts.extend([lo - 1.0, hi + 1.0])
    return np.unique(pts)


def bound_t1(spec1, spec2, x1, x2, grid=None):
    """``delta = rho(x1, x2) + sup_x T_1(Pi_1(x, .), Pi_2(x, .))`` and ``G(delta)``.

    The kernels are constant outside the interpolation bands, so a grid
    through both plateaus and across each band gives the supremum up to the
    band resolution.
    """
    grid = bound_grid(spec1, spec2) if grid is None else np.asarray(grid, dtype=float)
    sup = max(kernel_t1(spec1, spec2, float(x)) for x in grid)
    delta = rho(x1, x2) + sup
    return BoundReport(delta, G(delta), "T1")


BOUND_T2_TERMS = ("rho0", "drift_gap", "abar_gap", "diffusion_gap", "sup_t2")


def bound_t2(params):
    """Assemble ``rho0 + |a1-a2|^2 + |abar1-abar2|^2 + |b1-b2|^2 + T + T^2`` and ``G``.

    ``params`` holds the initial gap ``rho0``, the sup-norm gaps
    ``drift_gap``, ``abar_gap`` and ``diffusion_gap``, and ``sup_t2``, the
    supremum over x of ``T_2`` between the kernels.
    """
    for term in BOUND_T2_TERMS:
        if term not in params or params[term] is None:
            raise IncompleteInputError(term)
        if not float(params[term]) >= 0:
            raise ValidationError(f"{term} must be non-negative")
    p = {k: float(params[k]) for k in BOUND_T2_TERMS}
    s = p["sup_t2"]
    delta = p["rho0"] + p["drift_gap"] ** 2 + p["abar_gap"] ** 2 + p["diffusion_gap"] ** 2 + s + s * s
    return BoundReport(delta, G(delta), "T2")


def abar(spec, x):
    """``Pi(x, {|u| > 1})``."""
    plus, minus = spec.kernel_at(x)
    total = float(plus.tail_plus(1.0))
    if minus is not None:
        total += float(minus.tail_plus(1.0))
    return total


def sup_gap_on_grid(f1, f2, grid):
    """``max_x |f1(x) - f2(x)|`` over ``grid``."""
    return max(abs(f1(float(x)) - f2(float(x))) for x in grid)
