"""Simulation of non-overlapping k-spacings of a uniform sample.

A sample of N spacings at order k is built from n+1 = N*k unit exponentials:
block sums Y_i ~ Gamma(k) and D_i = Y_i / S where S is the total.  The
normalizer mu = S / (N k) converges to 1, and W_i = cdf_k(N k D_i) sorted
ascending is the uniform-type path whose centered step process is the
object the modulus diagnostics study.

Streams are counter-based and splittable: Philox keyed by
(seed, k, N, replicate), so any replicate is reproducible in isolation and
substreams never collide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gammaint
from .errors import DomainError, ResourceLimitError
from .modulus import EmpiricalPath

__all__ = [
    "SpacingsSample",
    "UniformizedSample",
    "from_exponentials",
    "ks_statistic",
    "sample_spacings",
    "stream_generator",
    "uniformize",
]

MAX_POINTS = 10**8


def stream_generator(seed: int, k: int, n_spacings: int, replicate: int = 0) -> np.random.Generator:
    """Independent substream for one (seed, k, N, replicate) cell."""
    root = np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
        spawn_key=(int(k), int(n_spacings), int(replicate)),
    )
    return np.random.Generator(np.random.Philox(root))


@dataclass(frozen=True, eq=False)
class SpacingsSample:
    """One simulated draw of N k-spacings."""

    k: int
    N: int
    n: int  # N*k - 1, the underlying uniform sample size
    y: np.ndarray  # gamma(k) block sums, length N
    s_total: float  # S = sum of all N*k exponentials (= y.sum())
    d: np.ndarray  # spacings y / s_total
    mu: float  # normalizer S / (N k)
    seed: int
    replicate: int


def from_exponentials(
    k: int, n_spacings: int, exponentials: np.ndarray, seed: int = -1, replicate: int = 0
) -> SpacingsSample:
    """Assemble a sample from an explicit exponential stream (tests inject here)."""
    k = int(k)
    n_spacings = int(n_spacings)
    if k < 1:
        raise DomainError(f"order must be >= 1, got {k}")
    if n_spacings < 2:
        raise DomainError(f"need at least 2 spacings, got {n_spacings}")
    e = np.asarray(exponentials, dtype=np.float64)
    if e.shape != (n_spacings * k,):
        raise DomainError(
            f"expected {n_spacings * k} exponentials, got shape {e.shape}"
        )
    if not np.all(np.isfinite(e)) or np.any(e < 0.0):
        raise DomainError("exponentials must be finite and >= 0")
    y = e.reshape(n_spacings, k).sum(axis=1)
    s_total = float(y.sum())
    if s_total <= 0.0:
        raise DomainError("degenerate stream: total mass is zero")
    d = y / s_total
    mu = s_total / (n_spacings * k)
    return SpacingsSample(
        k=k,
        N=n_spacings,
        n=n_spacings * k - 1,
        y=y,
        s_total=s_total,
        d=d,
        mu=mu,
        seed=int(seed),
        replicate=int(replicate),
    )


def sample_spacings(
    k: int, n_spacings: int, seed: int, replicate: int = 0
) -> SpacingsSample:
    """Draw N k-spacings using the keyed substream for (seed, k, N, replicate)."""
    k = int(k)
    n_spacings = int(n_spacings)
    if k < 1:
        raise DomainError(f"order must be >= 1, got {k}")
    if n_spacings < 2:
        raise DomainError(f"need at least 2 spacings, got {n_spacings}")
    if n_spacings * k > MAX_POINTS:
        raise ResourceLimitError(
            f"sample of {n_spacings * k} exponentials exceeds cap {MAX_POINTS}"
        )
    g = stream_generator(seed, k, n_spacings, replicate)
    u = g.random(n_spacings * k)
    e = -np.log1p(-u)
    return from_exponentials(k, n_spacings, e, seed=seed, replicate=replicate)


@dataclass(frozen=True, eq=False)
class UniformizedSample:
    """Sorted gamma-cdf transforms of the scaled spacings."""

    w: np.ndarray
    k: int
    N: int
    seed: int

    def to_path(self) -> EmpiricalPath:
        return EmpiricalPath(self.w)


def uniformize(sample: SpacingsSample) -> UniformizedSample:
    """W_i = cdf_k(N k D_i), sorted ascending.

    The monotone transform makes the centered step process of W exactly the
    reduced empirical process of the spacings sample.
    """
    scaled = (sample.N * sample.k) * sample.d
    w = np.sort(gammaint.cdf_array(sample.k, scaled))
    return UniformizedSample(w=w, k=sample.k, N=sample.N, seed=sample.seed)


def ks_statistic(sorted_values: np.ndarray) -> float:
    """One-sample Kolmogorov-Smirnov distance of a sorted sample vs uniform."""
    w = np.asarray(sorted_values, dtype=np.float64)
    n = w.size
    if n == 0:
        raise DomainError("empty sample")
    i = np.arange(1, n + 1)
    return float(max((i / n - w).max(), (w - (i - 1) / n).max()))
