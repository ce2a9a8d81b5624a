"""Monte-Carlo study of ``eps * T_1`` between empirical and true Pareto measures.

For every ``(alpha, eps)`` cell, ``reps`` samples of size ``n`` are drawn
from the probability-normalised ``ParetoTail(alpha, eps)`` and the mean and
standard deviation of the normalised distance are recorded.  Replicate ``r``
of cell ``(i, j)`` uses ``RngStream.for_context(seed, "study", i, j, r)``, so
each cell can be recomputed on its own.
"""

from __future__ import annotations

import csv
import json
import math
import pathlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distance import ALPHA_ONE_BAND, t1_empirical_vs_pareto, tp_quadrature
from .errors import LevyTransportError, ValidationError
from .measures import Empirical, transport_empirical, transport_pareto
from .sampling import RngStream, sample_pareto


def _default_alphas():
    return [float(a) for a in range(1, 11)]


def _default_epsilons():
    return [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


@dataclass(frozen=True)
class StudyGrid:
    alphas: list = field(default_factory=_default_alphas)
    epsilons: list = field(default_factory=_default_epsilons)
    n: int = 100
    reps: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphas", [float(a) for a in self.alphas])
        object.__setattr__(self, "epsilons", [float(e) for e in self.epsilons])
        if not self.alphas or not self.epsilons:
            raise ValidationError("study grid needs at least one alpha and one eps")
        if any(a <= 0 for a in self.alphas) or any(e <= 0 for e in self.epsilons):
            raise ValidationError("alphas and epsilons must be positive")
        if int(self.n) < 1:
            raise ValidationError("sample size n must be at least 1")
        if int(self.reps) < 2:
            raise ValidationError("reps must be at least 2 for a standard deviation")

    def to_dict(self):
        return {"alphas": self.alphas, "epsilons": self.epsilons, "n": self.n, "reps": self.reps, "seed": self.seed}


@dataclass(frozen=True)
class StudyCell:
    alpha: float
    eps: float
    mean: float
    sd: float
    reps: int

    def to_dict(self):
        return {"alpha": self.alpha, "eps": self.eps, "mean": self.mean, "sd": self.sd, "reps": self.reps}


def normalized_distance(sample, alpha, eps):
    """``eps * T_1(Pi_n, ParetoTail(alpha, eps))``; quadrature at ``alpha = 1``."""
    emp = Empirical(sample, eps)
    if abs(alpha - 1.0) <= ALPHA_ONE_BAND:
        return eps * tp_quadrature(transport_empirical(emp, eps), transport_pareto(alpha, eps)).value
    return eps * t1_empirical_vs_pareto(emp, eps, alpha).value


def _draw(alpha, eps, n, stream):
    s = sample_pareto(alpha, eps, n, stream)
    # a uniform of exactly 1 lands on eps itself; the empirical measure needs > eps
    return np.maximum(s, math.nextafter(eps, math.inf))


def run_cell(grid, i, j):
    alpha, eps = grid.alphas[i], grid.epsilons[j]
    vals = np.empty(grid.reps)
    try:
        for r in range(grid.reps):
            sample = _draw(alpha, eps, grid.n, RngStream.for_context(grid.seed, "study", i, j, r))
            vals[r] = normalized_distance(sample, alpha, eps)
    except LevyTransportError as exc:
        raise type(exc)(f"cell (alpha={alpha}, eps={eps}): {exc}") from exc
    return StudyCell(alpha, eps, float(vals.mean()), float(vals.std(ddof=1)), grid.reps)


def run_study(grid, threads=1):
    """Matrix of :class:`StudyCell` with alpha rows and eps columns."""
    jobs = [(i, j) for i in range(len(grid.alphas)) for j in range(len(grid.epsilons))]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            cells = list(pool.map(lambda ij: run_cell(grid, *ij), jobs))
    else:
        cells = [run_cell(grid, i, j) for i, j in jobs]
    ncol = len(grid.epsilons)
    return [cells[k : k + ncol] for k in range(0, len(cells), ncol)]


def _write_matrix(path, grid, matrix, attr):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha"] + [f"{e:g}" for e in grid.epsilons])
        for a, row in zip(grid.alphas, matrix):
            w.writerow([f"{a:g}"] + [repr(getattr(c, attr)) for c in row])


def write_study(out_dir, grid, matrix):
    """``means.csv``, ``sds.csv`` and ``study.json`` in ``out_dir``."""
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_matrix(out_dir / "means.csv", grid, matrix, "mean")
    _write_matrix(out_dir / "sds.csv", grid, matrix, "sd")
    bundle = {
        "grid": grid.to_dict(),
        "stream": "RngStream.for_context(seed, 'study', alpha_index, eps_index, replicate)",
        "cells": [c.to_dict() for row in matrix for c in row],
    }
    with (out_dir / "study.json").open("w") as fh:
        json.dump(bundle, fh, indent=2, sort_keys=True)
    return bundle
