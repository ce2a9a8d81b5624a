"""Levy measure specifications and their transportation functions.

Every measure ``Pi`` on the real line without the origin is represented as the
image of the Cauchy reference measure ``Pi0(dv) = dv / v**2`` under a
non-decreasing, sign-preserving map ``c``: ``Pi = Pi0 o c^{-1}``.  Mass of
``Pi0`` that ``c`` sends to the origin is ignored, so finite measures need no
explicit point mass at zero.

Transport functions are stored piecewise on each half-line.  On ``|v|`` in
``[b_j, b_{j+1})`` the magnitude is a constant, a power ``a * |v|**e``, or a
numerically inverted tail; below the first breakpoint it is zero.  The
negative half mirrors the positive one, which gives right continuity on
``[0, inf)`` and left continuity on ``(-inf, 0]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, ClassVar, Union

import numpy as np
from scipy import special

from .errors import DivergenceError, ValidationError

CONST, POWER, NUMERIC = 0, 1, 2
DEFAULT_TOL = 1e-12


def _positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValidationError(f"{name} must be a finite positive number, got {value!r}")
    return value


# --------------------------------------------------------------------------
# measure specifications


@dataclass(frozen=True)
class ParetoTail:
    """``lam * v**-(alpha+1) dv`` on ``(eps, inf)``.

    ``lam=None`` selects the probability normalisation ``lam = alpha*eps**alpha``.
    """

    alpha: float
    eps: float
    lam: float | None = None
    kind: ClassVar[str] = "pareto"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "eps", _positive("eps", self.eps))
        lam = self.alpha * self.eps**self.alpha if self.lam is None else self.lam
        object.__setattr__(self, "lam", _positive("lambda", lam))

    @property
    def mass(self):
        return self.lam * self.eps ** (-self.alpha) / self.alpha

    def tail_plus(self, u):
        u = np.maximum(np.asarray(u, dtype=float), self.eps)
        return self.lam * u ** (-self.alpha) / self.alpha

    def tail_minus(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))


@dataclass(frozen=True)
class TwoSidedPowerLaw:
    """Power tails beyond ``+-1`` with tails ``lam_pm * u**-alpha_pm`` for ``u >= 1``.

    This is the family whose transport is ``sign(y) * (|y| lam)**(1/alpha)``
    for ``|y| >= 1/lam``.
    """

    alpha_plus: float
    alpha_minus: float
    lambda_plus: float
    lambda_minus: float
    kind: ClassVar[str] = "two_sided"

    def __post_init__(self):
        for name in ("alpha_plus", "alpha_minus"):
            value = float(getattr(self, name))
            if not value > 1:
                raise ValidationError(f"{name} must exceed 1, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("lambda_plus", "lambda_minus"):
            value = float(getattr(self, name))
            if not (value >= 0 and math.isfinite(value)):
                raise ValidationError(f"{name} must be non-negative, got {value!r}")
            object.__setattr__(self, name, value)
        if self.lambda_plus == 0 and self.lambda_minus == 0:
            raise ValidationError("degenerate measure: both intensities are zero")

    def tail_plus(self, u):
        u = np.maximum(np.asarray(u, dtype=float), 1.0)
        return self.lambda_plus * u ** (-self.alpha_plus)

    def tail_minus(self, u):
        u = np.maximum(np.asarray(u, dtype=float), 1.0)
        return self.lambda_minus * u ** (-self.alpha_minus)


@dataclass(frozen=True)
class GammaMeasure:
    """``gamma * exp(-lam v) / v dv`` on ``(0, inf)`` (infinite activity)."""

    gamma: float
    lam: float
    kind: ClassVar[str] = "gamma"

    def __post_init__(self):
        object.__setattr__(self, "gamma", _positive("gamma", self.gamma))
        object.__setattr__(self, "lam", _positive("lambda", self.lam))

    def tail_plus(self, u):
        return self.gamma * special.exp1(self.lam * np.asarray(u, dtype=float))

    def tail_minus(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))


@dataclass(frozen=True, eq=False)
class Empirical:
    """Atoms of mass ``1/n`` at the observed jump sizes, all above ``eps``."""

    sample: np.ndarray
    eps: float
    kind: ClassVar[str] = "empirical"

    def __post_init__(self):
        eps = _positive("eps", self.eps)
        sample = np.asarray(self.sample, dtype=float).ravel()
        if sample.size == 0:
            raise ValidationError("empirical sample is empty")
        if not np.all(np.isfinite(sample)):
            raise ValidationError("empirical sample contains non-finite values")
        if np.any(np.diff(sample) < 0):
            raise ValidationError("empirical sample must be sorted non-decreasingly")
        bad = np.flatnonzero(sample <= eps)
        if bad.size:
            raise ValidationError(
                f"{bad.size} sample value(s) not above eps={eps}: "
                f"indices {bad[:10].tolist()}, values {sample[bad[:10]].tolist()}"
            )
        sample.setflags(write=False)
        object.__setattr__(self, "sample", sample)
        object.__setattr__(self, "eps", eps)

    @property
    def n(self):
        return self.sample.size

    def tail_plus(self, u):
        u = np.asarray(u, dtype=float)
        return (self.n - np.searchsorted(self.sample, u, side="right")) / self.n

    def tail_minus(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def mass_between(self, a, b):
        """``Pi_n((a, b])``."""
        return float(self.tail_plus(a) - self.tail_plus(b))


@dataclass(frozen=True, eq=False)
class GenericTail:
    """Measure given by its tail functions ``u -> Pi((u, inf))`` and ``u -> Pi((-inf, -u))``."""

    tail_plus_fn: Callable
    tail_minus_fn: Callable | None = None
    source: dict = field(default_factory=dict)
    kind: ClassVar[str] = "tail"

    def tail_plus(self, u):
        return np.asarray(self.tail_plus_fn(np.asarray(u, dtype=float)), dtype=float)

    def tail_minus(self, u):
        if self.tail_minus_fn is None:
            return np.zeros_like(np.asarray(u, dtype=float))
        return np.asarray(self.tail_minus_fn(np.asarray(u, dtype=float)), dtype=float)


MeasureSpec = Union[ParetoTail, TwoSidedPowerLaw, GammaMeasure, Empirical, GenericTail]


# --------------------------------------------------------------------------
# transport functions


@dataclass(frozen=True, eq=False)
class HalfTransport:
    """Magnitude of a transport function on one half-line, ``|v| >= 0``."""

    breaks: np.ndarray
    kinds: np.ndarray
    coef: np.ndarray
    expo: np.ndarray
    tail: Callable | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        for name, dtype in (("breaks", float), ("kinds", np.int8), ("coef", float), ("expo", float)):
            arr = np.array(getattr(self, name), dtype=dtype).ravel()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.breaks) <= 0) or self.breaks[0] < 0:
            raise ValidationError("breakpoints must be non-negative and strictly increasing")
        if np.any(self.kinds == NUMERIC) and self.tail is None:
            raise ValidationError("numeric branch needs a tail function")

    def __len__(self):
        return self.breaks.size

    @property
    def analytic(self):
        return not np.any(self.kinds == NUMERIC)

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        idx = np.searchsorted(self.breaks, v, side="right") - 1
        out = np.zeros(v.shape)
        live = idx >= 0
        if not np.any(live):
            return out
        j = idx[live]
        kind = self.kinds[j]
        val = np.where(kind == CONST, self.coef[j], 0.0)
        pw = kind == POWER
        if np.any(pw):
            vv = v[live][pw]
            val[pw] = self.coef[j][pw] * vv ** self.expo[j][pw]
        nm = kind == NUMERIC
        if np.any(nm):
            val[nm] = invert_tail(self.tail, v[live][nm], self.tol)
        out[live] = val
        return out

    def inverse(self, u):
        """Generalised inverse ``inf{v >= 0 : c(v) > u}`` for ``u >= 0`` (``inf`` if none)."""
        u = float(u)
        n = self.breaks.size
        for j in range(n):
            lo = self.breaks[j]
            hi = self.breaks[j + 1] if j + 1 < n else math.inf
            kind = self.kinds[j]
            if kind == CONST:
                if self.coef[j] > u:
                    return lo
            elif kind == POWER:
                if u <= 0:
                    return lo
                v = (u / self.coef[j]) ** (1.0 / self.expo[j])
                if v < hi:
                    return max(lo, v)
            else:
                t = float(self.tail(np.array([u]))[0])
                v = math.inf if t <= 0 else 1.0 / t
                if v < hi:
                    return max(lo, v)
        return math.inf


@dataclass(frozen=True, eq=False)
class TransportFunction:
    """Monotone, sign-preserving map ``c`` with ``Pi = Pi0 o c^{-1}``."""

    plus: HalfTransport | None
    minus: HalfTransport | None = None
    sign_preserving: ClassVar[bool] = True

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        out = np.zeros(v.shape)
        pos = v > 0
        neg = v < 0
        if self.plus is not None and np.any(pos):
            out[pos] = self.plus(v[pos])
        if self.minus is not None and np.any(neg):
            out[neg] = -self.minus(-v[neg])
        return out if out.ndim else float(out)

    def half(self, side):
        return self.plus if side > 0 else self.minus

    @property
    def breakpoints(self):
        pos = self.plus.breaks if self.plus is not None else np.empty(0)
        neg = -self.minus.breaks[::-1] if self.minus is not None else np.empty(0)
        return np.concatenate([neg, pos])

    def pushforward_tail(self, u):
        """``Pi0({v : c(v) > u})`` for ``u > 0``."""
        if self.plus is None:
            return 0.0
        v = self.plus.inverse(u)
        return 0.0 if math.isinf(v) else 1.0 / v

    def pushforward_lower_tail(self, u):
        """``Pi0({v : c(v) < -u})`` for ``u > 0``."""
        if self.minus is None:
            return 0.0
        v = self.minus.inverse(u)
        return 0.0 if math.isinf(v) else 1.0 / v


def invert_tail(tail, v, tol=DEFAULT_TOL):
    """Vectorised ``inf{u : tail(u) <= 1/v}`` by bracketing and bisection.

    The bracket ``[lo, hi]`` is shrunk until its width is below
    ``tol * min(1, hi)``: absolute accuracy ``tol`` for values above 1 and
    relative accuracy below, so tiny transport values near the origin stay
    meaningful after division by ``v**2``.
    """
    v = np.asarray(v, dtype=float)
    shape = v.shape
    v = v.ravel()
    with np.errstate(over="ignore"):
        target = 1.0 / v  # subnormal v: an infinite target means c(v) = 0 to working precision
    lo = np.zeros_like(v)
    hi = np.ones_like(v)
    t_hi = np.asarray(tail(hi), dtype=float)
    up = t_hi > target
    for _ in range(1100):
        need = t_hi > target
        if not np.any(need):
            break
        if np.any(hi[need] > 1e300):
            raise DivergenceError("tail function does not decay to zero")
        new_hi = 2.0 * hi[need]
        t_new = np.asarray(tail(new_hi), dtype=float)
        if np.any(t_new > t_hi[need] * (1 + 1e-12)):
            raise ValidationError("tail function is not non-increasing")
        lo[need] = hi[need]
        hi[need] = new_hi
        t_hi[need] = t_new
    else:
        raise DivergenceError("tail function does not decay to zero")
    # answers below 1: push the lower end down with doubling log-steps
    down = ~up
    step = np.full(v.shape, math.log(16.0))
    t_prev = t_hi.copy()
    for _ in range(12):
        if not np.any(down):
            break
        idx = np.flatnonzero(down)
        probe = np.exp(-step[idx])
        t_lo = np.asarray(tail(probe), dtype=float)
        if np.any(t_lo < t_prev[idx] * (1 - 1e-12)):
            raise ValidationError("tail function is not non-increasing")
        t_prev[idx] = t_lo
        found = t_lo > target[idx]
        lo[idx[found]] = probe[found]
        hi[idx[~found]] = probe[~found]
        down[idx[found]] = False
        step[idx] *= 2.0
        step = np.minimum(step, 740.0)
    # Illinois regula falsi on log(tail) against log(u), every fourth step a
    # plain bisection; [lo, hi] always brackets the answer
    live = lo > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_target = np.log(target)
        x_lo = np.log(np.where(live, lo, 1.0))
        x_hi = np.log(hi)
        f_lo = np.log(np.asarray(tail(np.where(live, lo, 1.0)), dtype=float)) - log_target
        f_hi = np.log(np.asarray(tail(hi), dtype=float)) - log_target
        last = np.zeros(v.shape, dtype=np.int8)
        for it in range(400):
            width = hi - lo
            active = live & (width > np.maximum(tol * np.minimum(1.0, hi), 4 * np.spacing(hi)))
            if not np.any(active):
                break
            a, b = x_lo[active], x_hi[active]
            fa, fb = f_lo[active], f_hi[active]
            x = b - fb * (b - a) / (fb - fa)
            if it % 4 == 3:
                x = np.full_like(a, np.nan)
            bad = ~np.isfinite(x) | (x <= a) | (x >= b)
            x[bad] = 0.5 * (a[bad] + b[bad])
            u = np.exp(x)
            l_act, h_act = lo[active], hi[active]
            outside = ~((u > l_act) & (u < h_act))
            u[outside] = 0.5 * (l_act[outside] + h_act[outside])
            x[outside] = np.log(u[outside])
            tu = np.asarray(tail(u), dtype=float)
            fu = np.log(tu) - log_target[active]
            below = tu <= target[active]
            side = last[active]
            # Illinois: halve the stale end's residual when the same end moves twice
            fa = np.where(below & (side == -1), 0.5 * fa, fa)
            fb = np.where(~below & (side == 1), 0.5 * fb, fb)
            h_act = np.where(below, u, h_act)
            b = np.where(below, x, b)
            fb = np.where(below, fu, fb)
            l_act = np.where(below, l_act, u)
            a = np.where(below, a, x)
            fa = np.where(below, fa, fu)
            hi[active], lo[active] = h_act, l_act
            x_hi[active], x_lo[active] = b, a
            f_hi[active], f_lo[active] = fb, fa
            last[active] = np.where(below, -1, 1)
    return hi.reshape(shape)


def transport_from_tail(tail, v, tol=DEFAULT_TOL):
    """Transport value ``c(v) = inf{u : tail(u) <= 1/v}`` to absolute tolerance ``tol``.

    Values below 1 are resolved to relative accuracy ``tol``, which is finer.

    Parameters
    ----------
    tail : callable
        Non-increasing, vectorised ``u -> Pi((u, inf))`` tending to 0.
    v : float
        Cauchy coordinate, ``v > 0``.
    tol : float
        Absolute tolerance of the bisection.
    """
    v = _positive("v", v)
    tol = _positive("tol", tol)
    return float(invert_tail(tail, np.array([v]), tol)[0])


def transport_pareto(alpha, eps, lam=None):
    """Transport of ``ParetoTail(alpha, eps, lam)``.

    Zero below ``alpha * eps**alpha / lam`` and ``(lam v / alpha)**(1/alpha)``
    from there on.
    """
    spec = ParetoTail(alpha, eps, lam)
    return TransportFunction(plus=_pareto_half(spec))


def _pareto_half(spec):
    return HalfTransport(
        breaks=[spec.alpha * spec.eps**spec.alpha / spec.lam],
        kinds=[POWER],
        coef=[(spec.lam / spec.alpha) ** (1.0 / spec.alpha)],
        expo=[1.0 / spec.alpha],
    )


def empirical_breaks(n):
    """Left ends ``n/(n-i+1)``, ``i = 1..n``, of the Cauchy intervals carrying each atom."""
    i = np.arange(1, n + 1)
    return n / (n - i + 1.0)


def transport_empirical(sample, eps):
    """Piecewise-constant transport of the empirical measure of ``sample``.

    ``c = 0`` on ``[0, 1)``, ``c = xi_(i)`` on ``[n/(n-i+1), n/(n-i))`` and
    ``c = xi_(n)`` for ``v >= n``.
    """
    spec = sample if isinstance(sample, Empirical) else Empirical(sample, eps)
    return TransportFunction(plus=_empirical_half(spec))


def _empirical_half(spec):
    n = spec.n
    return HalfTransport(
        breaks=empirical_breaks(n),
        kinds=np.full(n, CONST),
        coef=spec.sample,
        expo=np.zeros(n),
    )


def two_sided_transport(spec):
    """Transport ``-(|y| lam_-)**(1/alpha_-)`` for ``y <= -1/lam_-`` and ``(y lam_+)**(1/alpha_+)`` for ``y >= 1/lam_+``."""
    if not isinstance(spec, TwoSidedPowerLaw):
        raise ValidationError("two_sided_transport needs a TwoSidedPowerLaw")

    def half(alpha, lam):
        if lam == 0:
            return None
        return HalfTransport(breaks=[1.0 / lam], kinds=[POWER], coef=[lam ** (1.0 / alpha)], expo=[1.0 / alpha])

    return TransportFunction(
        plus=half(spec.alpha_plus, spec.lambda_plus),
        minus=half(spec.alpha_minus, spec.lambda_minus),
    )


def _numeric_half(tail, tol):
    # the pivot at v = 1 only splits the quadrature domain
    return HalfTransport(breaks=[0.0, 1.0], kinds=[NUMERIC, NUMERIC], coef=[0, 0], expo=[0, 0], tail=tail, tol=tol)


def transport(spec, tol=DEFAULT_TOL):
    """Transport function of any measure specification."""
    if isinstance(spec, ParetoTail):
        return TransportFunction(plus=_pareto_half(spec))
    if isinstance(spec, Empirical):
        return TransportFunction(plus=_empirical_half(spec))
    if isinstance(spec, TwoSidedPowerLaw):
        return two_sided_transport(spec)
    if isinstance(spec, GammaMeasure):
        return TransportFunction(plus=_numeric_half(spec.tail_plus, tol))
    if isinstance(spec, GenericTail):
        minus = _numeric_half(spec.tail_minus, tol) if spec.tail_minus_fn is not None else None
        return TransportFunction(plus=_numeric_half(spec.tail_plus, tol), minus=minus)
    raise ValidationError(f"unknown measure specification {spec!r}")


def support_eps(spec):
    """Largest ``eps`` such that ``spec`` puts no mass on ``(-eps, eps)`` (0 if none)."""
    if isinstance(spec, (ParetoTail, Empirical)):
        return spec.eps
    if isinstance(spec, TwoSidedPowerLaw):
        return 1.0
    return 0.0


# --------------------------------------------------------------------------
# serialisation


def read_sample_csv(path):
    """Read one value per line; a non-numeric first line is taken as a header."""
    path = Path(path)
    values = []
    bad = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip().split(",")[-1].strip()
            if not text:
                continue
            try:
                x = float(text)
            except ValueError:
                if lineno == 1:
                    continue
                bad.append(lineno)
                continue
            if not math.isfinite(x):
                bad.append(lineno)
                continue
            values.append(x)
    if bad:
        raise ValidationError(f"{path}: non-numeric or non-finite values on rows {bad[:20]}")
    return np.array(values)


def write_sample_csv(path, sample):
    with Path(path).open("w") as fh:
        for x in np.asarray(sample, dtype=float):
            fh.write(f"{float(x)!r}\n")


def _tail_from_expr(expr):
    import sympy

    u = sympy.Symbol("u", positive=True)
    try:
        parsed = sympy.sympify(expr, locals={"u": u})
    except (sympy.SympifyError, TypeError, SyntaxError) as exc:
        raise ValidationError(f"cannot parse tail expression {expr!r}: {exc}") from None
    fn = sympy.lambdify(u, parsed, modules=["scipy", "numpy"])
    return lambda x: np.broadcast_to(np.asarray(fn(x), dtype=float), np.shape(x)).copy()


def spec_from_dict(data, base_dir=None):
    """Build a measure specification from its JSON object."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("measure JSON must be an object with a 'kind' key")
    kind = data["kind"]
    try:
        if kind == "pareto":
            return ParetoTail(data["alpha"], data["eps"], data.get("lambda"))
        if kind == "two_sided":
            return TwoSidedPowerLaw(
                data["alpha_plus"], data["alpha_minus"], data["lambda_plus"], data["lambda_minus"]
            )
        if kind == "gamma":
            return GammaMeasure(data["gamma"], data["lambda"])
        if kind == "empirical":
            if "sample" in data:
                sample = np.asarray(data["sample"], dtype=float)
            elif "csv" in data:
                path = Path(data["csv"])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                sample = read_sample_csv(path)
            else:
                raise ValidationError("empirical measure needs 'sample' or 'csv'")
            return Empirical(np.sort(sample), data["eps"])
        if kind == "tail":
            minus = data.get("minus")
            return GenericTail(
                _tail_from_expr(data["plus"]),
                _tail_from_expr(minus) if minus else None,
                source={"plus": data["plus"], "minus": minus},
            )
    except KeyError as exc:
        raise ValidationError(f"measure of kind {kind!r} is missing key {exc}") from None
    raise ValidationError(f"unknown measure kind {kind!r}")


def spec_to_dict(spec):
    if isinstance(spec, ParetoTail):
        return {"kind": "pareto", "alpha": spec.alpha, "eps": spec.eps, "lambda": spec.lam}
    if isinstance(spec, TwoSidedPowerLaw):
        return {
            "kind": "two_sided",
            "alpha_plus": spec.alpha_plus,
            "alpha_minus": spec.alpha_minus,
            "lambda_plus": spec.lambda_plus,
            "lambda_minus": spec.lambda_minus,
        }
    if isinstance(spec, GammaMeasure):
        return {"kind": "gamma", "gamma": spec.gamma, "lambda": spec.lam}
    if isinstance(spec, Empirical):
        return {"kind": "empirical", "eps": spec.eps, "sample": spec.sample.tolist()}
    if isinstance(spec, GenericTail):
        if not spec.source:
            raise ValidationError("tail measure built from Python callables cannot be serialised")
        return {"kind": "tail", **spec.source}
    raise ValidationError(f"unknown measure specification {spec!r}")


def load_spec(path):
    path = Path(path)
    with path.open() as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(data, base_dir=path.parent)
