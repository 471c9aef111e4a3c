"""Seeded path simulation of the comprehension chain.

Replicates are driven by counter-based random streams: the variate for
(replicate r, session j) is a pure function of (seed, r, j) through a
splitmix-style 64-bit avalanche, so the empirical distribution depends only
on (params, d, samples, seed) and not on chunking, execution order, or
worker count.  Aggregation is by integer counts, normalized once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ModelParams, _require_valid, _success_prob_row
from .initial import InitialDistribution

__all__ = ["SimulationResult", "sample_paths", "tv_distance"]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 odd increment


def _mix64(z: np.ndarray) -> np.ndarray:
    """Splitmix64 avalanche on a uint64 array."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _uniforms(seed: int, start: int, count: int, session: int) -> np.ndarray:
    """Uniform [0, 1) variates for replicates start..start+count-1.

    Stream bases are avalanched mixes of (seed, replicate index); each
    session advances the base by one splitmix increment.
    """
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        base = _mix64(np.uint64(seed & _MASK64) + (idx + np.uint64(1)) * np.uint64(_GAMMA))
        z = _mix64(base + np.uint64((session * _GAMMA) & _MASK64))
    return (z >> np.uint64(11)) * 2.0**-53


@dataclass(frozen=True)
class SimulationResult:
    """Empirical distribution of the understood-session count.

    counts are exact integers summing to samples; empirical is counts /
    samples.  tv_to_exact is filled when an exact pmf was supplied for
    cross-validation.
    """

    samples: int
    seed: int
    counts: np.ndarray
    empirical: np.ndarray
    tv_to_exact: float | None = None

    @property
    def mean(self) -> float:
        """Empirical mean of the understood-session count."""
        k = np.arange(len(self.counts))
        return float((k * self.counts).sum() / self.samples)

    @property
    def std(self) -> float:
        """Empirical standard deviation of the count."""
        k = np.arange(len(self.counts))
        m = self.mean
        return float(np.sqrt(((k - m) ** 2 * self.counts).sum() / self.samples))


def sample_paths(
    params: ModelParams,
    d: InitialDistribution,
    samples: int,
    seed: int,
    *,
    exact: np.ndarray | None = None,
    _chunk_size: int = 1 << 16,
) -> SimulationResult:
    """Simulate `samples` independent course runs; seeded, reproducible.

    Each replicate draws the n session outcomes sequentially, comparing a
    counter-based uniform variate against the success probability for the
    current understood count.  Requires hypothesis1 validation.  Passing
    the exact pmf fills tv_to_exact.  _chunk_size only bounds memory; it
    cannot change the result.
    """
    _require_valid(params, "hypothesis1", d)
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if not 0 <= seed <= _MASK64:
        raise ValueError("seed must fit in 64 bits")
    n = params.n
    # Success probabilities per session, indexed by the prior understood
    # count: probs[j - 1][k] for k = 0..j-1.
    probs = [_success_prob_row(params, d, j) for j in range(1, n + 1)]
    counts = np.zeros(n + 1, dtype=np.int64)
    for start in range(0, samples, _chunk_size):
        count = min(_chunk_size, samples - start)
        k = np.zeros(count, dtype=np.int64)
        for j in range(1, n + 1):
            u = _uniforms(seed, start, count, j)
            k += u < probs[j - 1][k]
        counts += np.bincount(k, minlength=n + 1)
    empirical = counts / float(samples)
    tv = None if exact is None else tv_distance(empirical, exact)
    return SimulationResult(
        samples=samples, seed=seed, counts=counts, empirical=empirical, tv_to_exact=tv
    )


def tv_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Total variation distance between two pmfs on the same support."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"support mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())
