"""File-popularity models and i.i.d. demand sampling.

File indices are 1-based on every public surface; internal arrays are
0-based numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DemandDistribution",
    "DemandVector",
    "zipf_distribution",
    "harmonic_sum",
    "sample_demand_vector",
    "prefix_mass",
]

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DemandDistribution:
    """A non-increasing pmf over a library of ``m`` files.

    Arbitrary probability vectors are accepted; they are sorted to
    non-increasing order at construction and the permutation that maps the
    sorted index back to the caller's ordering is kept in ``order``.
    """

    q: tuple[float, ...]
    order: tuple[int, ...] = field(default=None)  # sorted pos -> original 1-based index

    def __post_init__(self):
        if len(self.q) == 0:
            raise ValueError("demand distribution needs at least one file")
        if any(x < 0 for x in self.q):
            raise ValueError("probabilities must be non-negative")
        total = math.fsum(self.q)
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if self.order is None:
            # stable sort keeps ties in the caller's order
            idx = sorted(range(len(self.q)), key=lambda i: -self.q[i])
            object.__setattr__(self, "q", tuple(self.q[i] for i in idx))
            object.__setattr__(self, "order", tuple(i + 1 for i in idx))
        else:
            for a, b in zip(self.q, self.q[1:]):
                if a < b:
                    raise ValueError("probabilities must be non-increasing")

    @property
    def m(self) -> int:
        return len(self.q)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.q, dtype=float)


@dataclass(frozen=True)
class DemandVector:
    """One requested file index (1-based) per user."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) == 0:
            raise ValueError("demand vector needs at least one user")

    @property
    def n(self) -> int:
        return len(self.entries)


def zipf_distribution(m: int, alpha: float) -> DemandDistribution:
    """Power-law pmf q_f proportional to f^-alpha over files 1..m."""
    if m < 1:
        raise ValueError(f"library size must be positive, got {m}")
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    weights = [f ** (-float(alpha)) for f in range(1, m + 1)]
    denom = math.fsum(weights)
    q = tuple(w / denom for w in weights)
    return DemandDistribution(q=q, order=tuple(range(1, m + 1)))


def harmonic_sum(alpha: float, x: int, y: int) -> float:
    """Generalized harmonic partial sum: sum of i^-alpha for i in [x, y].

    Direct compensated summation; m can reach 5e4 so naive accumulation
    would lose digits for small alpha.
    """
    if x < 1 or x > y:
        raise ValueError(f"need 1 <= x <= y, got x={x}, y={y}")
    return math.fsum(i ** (-float(alpha)) for i in range(x, y + 1))


def sample_demand_vector(
    dist: DemandDistribution, n: int, rng: np.random.Generator
) -> DemandVector:
    """Draw n i.i.d. file requests via inverse CDF on the prefix sums."""
    if n < 1:
        raise ValueError(f"user count must be positive, got {n}")
    cdf = np.cumsum(dist.as_array())
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, rng.random(n), side="right")
    return DemandVector(entries=tuple(int(i) + 1 for i in draws))


def prefix_mass(dist: DemandDistribution, mtilde: int) -> float:
    """Total probability of the mtilde most popular files."""
    if not 0 <= mtilde <= dist.m:
        raise ValueError(f"prefix length {mtilde} outside [0, {dist.m}]")
    return math.fsum(dist.q[:mtilde])
