"""Seeded, splittable random streams and the Pareto sampler.

A stream is addressed by ``(master_seed, stream_id)``.  The id is derived from
a context label and integer indices (``stream_id("study", ai, ei, r)``), so
any single replicate of an experiment can be replayed on its own.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .measures import Empirical, write_sample_csv

_MASK64 = (1 << 64) - 1


def stream_id(label, *indices):
    """Stable 64-bit id for ``(label, indices...)``; independent of ``PYTHONHASHSEED``."""
    text = "/".join([str(label), *(str(int(i)) for i in indices)])
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream.

    The generator is PCG64 seeded by ``SeedSequence(master_seed,
    spawn_key=(stream_id,))``; distinct ids give non-overlapping children of
    the same master entropy.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = int(getattr(self, name))
            if value < 0:
                raise ValidationError(f"{name} must be non-negative")
            object.__setattr__(self, name, value & _MASK64)

    def generator(self):
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, label, *indices):
        return RngStream(self.master_seed, stream_id(f"{self.stream_id}:{label}", *indices))

    @classmethod
    def for_context(cls, master_seed, label, *indices):
        return cls(master_seed, stream_id(label, *indices))


def _generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def uniform_open0(gen, size=None):
    """Uniforms on ``(0, 1]``."""
    return 1.0 - gen.random(size)


def pareto_quantile(u, alpha, eps):
    """Inverse CDF of the probability-normalised Pareto law: ``eps * u**(-1/alpha)``."""
    return eps * np.asarray(u, dtype=float) ** (-1.0 / alpha)


def sample_pareto(alpha, eps, n, rng):
    """Sorted i.i.d. sample of size ``n`` from ``ParetoTail(alpha, eps)``.

    Parameters
    ----------
    alpha, eps : float
        Exponent and support threshold.
    n : int
        Sample size, at least 1.
    rng : RngStream, numpy Generator or seed
    """
    if alpha <= 0 or eps <= 0:
        raise ValidationError("alpha and eps must be positive")
    n = int(n)
    if n < 1:
        raise ValidationError("sample size must be at least 1 (empty sample)")
    u = uniform_open0(_generator(rng), n)
    return np.sort(pareto_quantile(u, alpha, eps))


def empirical_from_sample(sample, eps):
    """Validated :class:`Empirical` measure with the sample sorted."""
    return Empirical(np.sort(np.asarray(sample, dtype=float).ravel()), eps)


def export_sample(path, sample):
    write_sample_csv(path, sample)
