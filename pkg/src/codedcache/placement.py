"""Caching distributions and random fractional cache realization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation

__all__ = [
    "SystemParams",
    "CachingDistribution",
    "CacheConfiguration",
    "rlfu_distribution",
    "validate_caching_distribution",
    "sample_cache_configuration",
]

_MASS_TOL = 1e-9
_CAP_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Shared-link network parameters.

    n users, m library files, cache capacity M (in files, may be
    fractional), B packets per file, packet_bits bits per packet (only the
    delivery layer cares about packet_bits).
    """

    n: int
    m: int
    M: float
    B: int
    packet_bits: int = 512

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one user, got n={self.n}")
        if self.m < 1:
            raise ValueError(f"need at least one file, got m={self.m}")
        if not 0 <= self.M <= self.m:
            raise ValueError(f"cache capacity M={self.M} outside [0, m={self.m}]")
        if self.B < 1:
            raise ValueError(f"need at least one packet per file, got B={self.B}")
        if self.packet_bits < 8 or self.packet_bits % 8:
            raise ValueError("packet_bits must be a positive multiple of 8")


@dataclass(frozen=True)
class CachingDistribution:
    """Per-file memory fractions p with sum 1 and p_f <= 1/M."""

    p: tuple[float, ...]

    def __post_init__(self):
        if len(self.p) == 0:
            raise ValueError("caching distribution needs at least one file")
        if any(x < 0 for x in self.p):
            raise ValueError("memory fractions must be non-negative")
        total = math.fsum(self.p)
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"memory fractions sum to {total!r}, not 1")

    @property
    def m(self) -> int:
        return len(self.p)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)


@dataclass(frozen=True)
class CacheConfiguration:
    """A cache realization: sorted packet-index tuples per (user, file).

    ``entries[u-1][f-1]`` is the tuple of 1-based packet indices of file f
    cached by user u.
    """

    entries: tuple[tuple[tuple[int, ...], ...], ...]
    B: int

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def m(self) -> int:
        return len(self.entries[0])

    def cached(self, user: int, file: int) -> tuple[int, ...]:
        """Packet indices of ``file`` cached by ``user`` (both 1-based)."""
        return self.entries[user - 1][file - 1]

    def cache_matrix(self, file: int) -> np.ndarray:
        """Boolean (n, B) membership matrix for one file."""
        out = np.zeros((self.n, self.B), dtype=bool)
        for u in range(self.n):
            idx = self.entries[u][file - 1]
            if idx:
                out[u, np.asarray(idx) - 1] = True
        return out

    def to_text(self) -> str:
        """Line-oriented dump ``u f i1,i2,...`` (one line per (u, f))."""
        lines = []
        for u in range(1, self.n + 1):
            for f in range(1, self.m + 1):
                idx = ",".join(str(i) for i in self.cached(u, f))
                lines.append(f"{u} {f} {idx}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, B: int) -> "CacheConfiguration":
        cells = {}
        n = m = 0
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                parts = line.split()
                if len(parts) == 2:
                    parts.append("")
                u_s, f_s, idx_s = parts
                u, f = int(u_s), int(f_s)
                idx = tuple(int(i) for i in idx_s.split(",")) if idx_s else ()
            except ValueError as exc:
                raise ValueError(f"bad cache line {lineno}: {line!r}") from exc
            cells[(u, f)] = idx
            n, m = max(n, u), max(m, f)
        entries = tuple(
            tuple(cells.get((u, f), ()) for f in range(1, m + 1))
            for u in range(1, n + 1)
        )
        return cls(entries=entries, B=B)


def rlfu_distribution(m: int, M: float, mtilde: int) -> CachingDistribution:
    """Truncated-uniform caching over the mtilde most popular files.

    mtilde == m is uniform placement; mtilde == ceil(M) caches the most
    popular files only (LFU-like placement).
    """
    if m < 1:
        raise ValueError(f"library size must be positive, got {m}")
    if mtilde > m:
        raise ValueError(f"cutoff {mtilde} exceeds library size {m}")
    if mtilde < max(math.ceil(M), 1):
        raise ValueError(
            f"cutoff {mtilde} below cache capacity M={M}; would need p_f > 1/M"
        )
    p = (1.0 / mtilde,) * mtilde + (0.0,) * (m - mtilde)
    return CachingDistribution(p=p)


def validate_caching_distribution(p: CachingDistribution, M: float) -> None:
    """Check p_f <= 1/M for every f (the sum-to-one check ran at construction)."""
    if M <= 1:
        return  # every p_f <= 1 <= 1/M
    cap = 1.0 / M
    for i, pf in enumerate(p.p):
        if pf > cap + _CAP_TOL:
            raise ConstraintViolation(
                f"p_{i + 1} = {pf} exceeds 1/M = {cap}", index=i + 1
            )


def sample_cache_configuration(
    p: CachingDistribution, params: SystemParams, rng: np.random.Generator
) -> CacheConfiguration:
    """Draw one cache realization.

    Each (user, file) pair independently stores round(p_f * M * B) distinct
    packets, uniform over all subsets of that size.
    """
    if p.m != params.m:
        raise ValueError(f"distribution over {p.m} files, system has {params.m}")
    validate_caching_distribution(p, params.M)
    B = params.B
    counts = []
    for f, pf in enumerate(p.p, 1):
        k = round(pf * params.M * B)
        if k > B:
            raise ValueError(
                f"file {f} would cache {k} > B={B} packets; p_f M = {pf * params.M}"
            )
        counts.append(max(k, 0))
    entries = []
    for _u in range(params.n):
        row = []
        for k in counts:
            if k == 0:
                row.append(())
            elif k == B:
                row.append(tuple(range(1, B + 1)))
            else:
                idx = rng.choice(B, size=k, replace=False)
                idx.sort()
                row.append(tuple(int(i) + 1 for i in idx))
        entries.append(tuple(row))
    return CacheConfiguration(entries=tuple(entries), B=B)
