"""Regime split of a scalar series and power-law fits of its large increments.

Increments ``d_t = x_{t+1} - x_t`` are labelled by the regime of the
pre-increment state ``x_t`` (warm above the threshold ``s_star``, cold
otherwise).  Increments above ``eps_plus`` or below ``-eps_minus`` are jumps;
everything in between is treated as continuous motion and dropped.  Each of
the four (regime, sign) samples is then compared against the family
``ParetoTail(alpha, eps)`` by the normalised distance ``eps * T_1``.
"""

from __future__ import annotations

import csv
import json
import math
import pathlib
import warnings
from dataclasses import dataclass, field

import numpy as np

from .distance import t1_empirical_vs_pareto
from .errors import ValidationError
from .measures import Empirical
from .sampling import _generator, sample_pareto

REGIMES = ("warm", "cold")
TAILS = ("positive", "negative")
CELLS = tuple((r, t) for r in REGIMES for t in TAILS)


@dataclass(frozen=True)
class AlphaGrid:
    lo: float = 2.0
    hi: float = 6.0
    step: float = 0.1

    def __post_init__(self):
        if not (self.lo < self.hi and self.step > 0):
            raise ValidationError("alpha grid needs lo < hi and step > 0")

    def values(self):
        k = int(math.floor((self.hi - self.lo) / self.step + 1e-9))
        # rounding keeps grid points at their decimal values (2.8, not 2.8000000000000003)
        return np.round(self.lo + self.step * np.arange(k + 1), 12)


@dataclass(frozen=True)
class RegimeConfig:
    s_star: float = -0.8
    delta: float = 0.1
    eps_plus: float = 0.36
    eps_minus: float = 0.34
    grid: AlphaGrid = field(default_factory=AlphaGrid)
    exclude_band: bool = False

    def __post_init__(self):
        if not (self.eps_plus > 0 and self.eps_minus > 0):
            raise ValidationError("eps_plus and eps_minus must be positive")
        if not self.delta > 0:
            raise ValidationError("delta must be positive")

    def regime(self, x):
        return "warm" if x > self.s_star else "cold"

    def eps(self, tail):
        return self.eps_plus if tail == "positive" else self.eps_minus

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        grid = data.pop("grid", None) or {}
        for key in ("alpha_lo", "alpha_hi", "alpha_step"):
            if key in data:
                grid[key.split("_")[1]] = data.pop(key)
        known = {"s_star", "delta", "eps_plus", "eps_minus", "exclude_band"}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown regime config keys {sorted(unknown)}")
        return cls(grid=AlphaGrid(**grid), **data)

    def to_dict(self):
        return {
            "s_star": self.s_star,
            "delta": self.delta,
            "eps_plus": self.eps_plus,
            "eps_minus": self.eps_minus,
            "exclude_band": self.exclude_band,
            "grid": {"lo": self.grid.lo, "hi": self.grid.hi, "step": self.grid.step},
        }


@dataclass
class JumpSamples:
    """The four jump samples (magnitudes, sorted) and warnings for empty cells."""

    cells: dict
    discarded: int
    warnings: list

    def __getitem__(self, key):
        return self.cells[key]

    def counts(self):
        return {f"{r},{t}": int(self.cells[(r, t)].size) for r, t in CELLS}


def extract_jumps(series, cfg=None):
    """Split the increments of ``series`` into the four (regime, tail) samples.

    Negative jumps are stored as magnitudes.  With ``cfg.exclude_band`` the
    increments starting inside ``[s_star - delta, s_star + delta]`` are
    dropped as well.
    """
    cfg = cfg or RegimeConfig()
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 2:
        raise ValidationError("series needs at least two values")
    if not np.all(np.isfinite(x)):
        raise ValidationError("series contains non-finite values")
    pre = x[:-1]
    d = np.diff(x)
    warm = pre > cfg.s_star
    keep = np.ones(d.size, dtype=bool)
    if cfg.exclude_band:
        keep = np.abs(pre - cfg.s_star) > cfg.delta
    pos = keep & (d > cfg.eps_plus)
    neg = keep & (d < -cfg.eps_minus)
    cells = {
        ("warm", "positive"): np.sort(d[pos & warm]),
        ("warm", "negative"): np.sort(-d[neg & warm]),
        ("cold", "positive"): np.sort(d[pos & ~warm]),
        ("cold", "negative"): np.sort(-d[neg & ~warm]),
    }
    notes = [f"no jumps in cell ({r}, {t})" for (r, t) in CELLS if cells[(r, t)].size == 0]
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return JumpSamples(cells, int(d.size - pos.sum() - neg.sum()), notes)


@dataclass(frozen=True)
class FitReport:
    regime: str
    tail: str
    n: int
    alphas: np.ndarray
    values: np.ndarray
    alpha_min: float
    t_min: float

    @property
    def curve(self):
        return list(zip(self.alphas.tolist(), self.values.tolist()))

    def to_dict(self):
        return {
            "regime": self.regime,
            "tail": self.tail,
            "n": self.n,
            "alpha_min": self.alpha_min,
            "t_min": self.t_min,
            "curve": [[a, v] for a, v in self.curve],
        }

    def write_curve(self, path):
        with pathlib.Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "t1_normalized"])
            for a, v in self.curve:
                w.writerow([repr(a), repr(v)])


def fit_alpha(sample, eps, grid=None, regime="", tail="positive"):
    """Scan the exponent grid for the smallest ``eps * T_1(Pi_n, ParetoTail(alpha, eps))``.

    Parameters
    ----------
    sample : array_like
        Jump magnitudes, all above ``eps``.
    eps : float
    grid : AlphaGrid or array_like, optional
        Exponents to scan (default 2.0 to 6.0 by 0.1).

    Returns
    -------
    FitReport
        Ties go to the smallest exponent.
    """
    emp = Empirical(np.sort(np.asarray(sample, dtype=float).ravel()), eps)
    grid = AlphaGrid() if grid is None else grid
    alphas = grid.values() if isinstance(grid, AlphaGrid) else np.asarray(grid, dtype=float)
    values = np.array([eps * t1_empirical_vs_pareto(emp, eps, a).value for a in alphas])
    k = int(np.argmin(values))
    return FitReport(regime, tail, emp.n, alphas, values, float(alphas[k]), float(values[k]))


def fit_all(jumps, cfg=None):
    """Fit every non-empty cell; returns ``{(regime, tail): FitReport}``."""
    cfg = cfg or RegimeConfig()
    out = {}
    for r, t in CELLS:
        sample = jumps[(r, t)]
        if sample.size:
            out[(r, t)] = fit_alpha(sample, cfg.eps(t), cfg.grid, r, t)
    return out


def weighted_exponent(fits):
    """``sum(alpha_i n_i) / sum(n_i)`` over ``(alpha, n)`` pairs."""
    fits = list(fits)
    total = sum(n for _, n in fits)
    if any(n < 0 for _, n in fits) or total <= 0:
        raise ValidationError("weighted exponent needs positive counts")
    return sum(a * n for a, n in fits) / total


def synthetic_regime_series(alphas, counts, cfg=None, rng=None, filler=0.3):
    """Series whose four jump cells are Pareto samples of prescribed exponents and sizes.

    Jumps are issued in random cell order.  Before each jump, small steps of
    magnitude at most ``filler`` (below both thresholds) carry the state to
    ``s_star + 1`` or ``s_star - 1`` so the jump starts in the intended
    regime.

    Parameters
    ----------
    alphas, counts : dict
        Keyed by ``(regime, tail)``.
    """
    cfg = cfg or RegimeConfig()
    if not filler < min(cfg.eps_plus, cfg.eps_minus):
        raise ValidationError("filler steps must stay below both jump thresholds")
    gen = _generator(rng)
    queue = []
    for cell in CELLS:
        n = int(counts.get(cell, 0))
        if n:
            eps = cfg.eps(cell[1])
            sizes = sample_pareto(alphas[cell], eps, n, gen)
            queue.extend((cell, s) for s in gen.permutation(sizes))
    order = gen.permutation(len(queue))
    x = [cfg.s_star + 1.0]
    for k in order:
        (regime, tail), size = queue[k]
        target = cfg.s_star + (1.0 if regime == "warm" else -1.0)
        cur = x[-1]
        while abs(target - cur) > 1e-12:
            step = float(np.clip(target - cur, -filler, filler))
            cur = cur + step
            x.append(cur)
        eps = cfg.eps(tail)
        sign = 1.0 if tail == "positive" else -1.0
        nxt = cur + sign * size
        # keep the realised increment above the threshold after rounding
        while not sign * (nxt - cur) > eps:
            size = math.nextafter(size, math.inf)
            nxt = cur + sign * size
        x.append(nxt)
    return np.array(x)


def read_series_csv(path, header=None, columns=None):
    """Read a series from CSV.

    Parameters
    ----------
    header : bool or None
        ``None`` detects a non-numeric first row.
    columns : {1, 2} or None
        One column (value) or two (time, value); ``None`` infers it from the
        first data row.  The value is always the last column.
    """
    path = pathlib.Path(path)
    values, bad = [], []
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    start = 0
    if rows and header is None:
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            start = 1
    elif header:
        start = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        row = [c.strip() for c in row]
        if not row or all(c == "" for c in row):
            continue
        ncol = columns or len(row)
        if ncol not in (1, 2) or len(row) != ncol:
            bad.append(lineno)
            continue
        try:
            v = float(row[-1])
            if ncol == 2:
                float(row[0])
        except ValueError:
            bad.append(lineno)
            continue
        if not math.isfinite(v):
            bad.append(lineno)
            continue
        values.append(v)
    if bad:
        raise ValidationError(f"{path}: missing, malformed or non-finite values on rows {bad[:20]}")
    if len(values) < 2:
        raise ValidationError(f"{path}: series needs at least two values")
    return np.array(values)


def write_reports(out_dir, reports, jumps, cfg):
    """Write ``fit.json`` and one curve CSV per fitted cell."""
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {
        "config": cfg.to_dict(),
        "counts": jumps.counts(),
        "warnings": jumps.warnings,
        "fits": [rep.to_dict() for rep in reports.values()],
        "weighted_exponent": weighted_summary(reports),
    }
    for (r, t), rep in reports.items():
        rep.write_curve(out_dir / f"curve_{r}_{t}.csv")
    with (out_dir / "fit.json").open("w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    return summary


def weighted_summary(reports):
    """Count-weighted exponents across regimes, per tail."""
    out = {}
    for tail in TAILS:
        pairs = [(rep.alpha_min, rep.n) for (r, t), rep in reports.items() if t == tail]
        out[tail] = weighted_exponent(pairs) if pairs else None
    return out
