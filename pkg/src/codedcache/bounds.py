"""Analytic rate expressions: achievable-side terms, the LFU naive-multicast
rate, and the information-theoretic lower bound.

All heavy products (binomial coefficient times powers) run in log space;
outer sums use compensated accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .demand import DemandDistribution
from .placement import CachingDistribution, validate_caching_distribution

__all__ = [
    "BoundsReport",
    "LowerBoundGrid",
    "mbar",
    "g_value",
    "rho",
    "psi",
    "psi_tilde",
    "rate_upper_bound",
    "lfu_nm_rate",
    "p1",
    "p2",
    "rate_lower_bound",
]


@dataclass(frozen=True)
class BoundsReport:
    """All analytic terms for one (n, m, M, q, placement) point.

    Units are equivalent file transmissions. ``lfu_nm_interpolated`` marks a
    fractional-M LFU rate obtained by linear interpolation of the boundary
    file's contribution.
    """

    psi: float
    mbar: float
    r_lb: float
    lfu_nm: float
    psi_tilde: float | None = None
    r_ub: float | None = None
    lfu_nm_interpolated: bool = False

    def __post_init__(self):
        for name in ("psi", "mbar", "r_lb", "lfu_nm"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class LowerBoundGrid:
    """Discretization of the continuous (r, z-target) maximization.

    The file-count index is subsampled with ``ell_stride`` (1 keeps all);
    pass 0 to pick ceil(m / 512) automatically.
    """

    r_points: int = 64
    z_tilde_points: int = 64
    ell_stride: int = 0

    def __post_init__(self):
        if self.r_points < 1 or self.z_tilde_points < 1 or self.ell_stride < 0:
            raise ValueError("grid counts must be positive")

    def stride_for(self, m: int) -> int:
        if self.ell_stride:
            return self.ell_stride
        return 1 if m <= 512 else math.ceil(m / 512)


def mbar(q: DemandDistribution, n: int) -> float:
    """Expected number of distinct files in n i.i.d. requests."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    terms = []
    for qf in q.q:
        if qf >= 1.0:
            terms.append(1.0)
        else:
            terms.append(-math.expm1(n * math.log1p(-qf)))
    return math.fsum(terms)


def g_value(p_f: float, M: float, l: int, n: int) -> float:
    """(p_f M)^(l-1) (1 - p_f M)^(n-l+1), with 0^0 == 1."""
    x = p_f * M
    if not 0.0 <= x <= 1.0 + 1e-12:
        raise ValueError(f"p_f * M = {x} outside [0, 1]")
    x = min(x, 1.0)
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    if x == 0.0:
        return 1.0 if l == 1 else 0.0
    if x == 1.0:
        return 0.0  # exponent n - l + 1 >= 1
    if n > 64:
        return math.exp((l - 1) * math.log(x) + (n - l + 1) * math.log1p(-x))
    return x ** (l - 1) * (1.0 - x) ** (n - l + 1)


def _g_vector(p: np.ndarray, M: float, l: int, n: int) -> np.ndarray:
    x = np.clip(p * M, 0.0, 1.0)
    out = np.zeros_like(x)
    interior = (x > 0.0) & (x < 1.0)
    xi = x[interior]
    out[interior] = np.exp((l - 1) * np.log(xi) + (n - l + 1) * np.log1p(-xi))
    if l == 1:
        out[x == 0.0] = 1.0
    return out


def _tie_classes(g: np.ndarray):
    """Ascending tie classes of g: yields (member indices, class g value)."""
    order = np.argsort(g, kind="stable")
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and g[order[j + 1]] == g[order[i]]:
            j += 1
        yield order[i : j + 1], float(g[order[i]])
        i = j + 1


def rho(
    q: DemandDistribution, p: CachingDistribution, M: float, n: int, l: int
) -> list[float]:
    """Probability that each file attains the max g among l popularity draws.

    Ties: the whole tie-class mass goes to the lowest-index member so the
    vector sums to 1; any other tie assignment leaves the achievable-rate
    term unchanged because tied files share the same g.
    """
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    qa = q.as_array()
    g = _g_vector(p.as_array(), M, l, n)
    out = np.zeros(len(qa))
    below = 0.0
    for members, _gval in _tie_classes(g):
        upto = below + float(qa[members].sum())
        out[int(members.min())] = upto**l - below**l
        below = upto
    return out.tolist()


def psi(q: DemandDistribution, p: CachingDistribution, M: float, n: int) -> float:
    """Achievable-rate term for the label-constrained greedy coloring."""
    validate_caching_distribution(p, M)
    qa = q.as_array()
    pa = p.as_array()
    terms = []
    for l in range(1, n + 1):
        log_binom = (
            gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1)
        )
        g = _g_vector(pa, M, l, n)
        below = 0.0
        inner = 0.0
        for members, gval in _tie_classes(g):
            upto = below + float(qa[members].sum())
            if gval > 0.0:
                inner += (upto**l - below**l) * gval
            below = upto
        if inner > 0.0:
            terms.append(math.exp(log_binom + math.log(inner)))
    return math.fsum(terms)


def psi_tilde(q: DemandDistribution, mtilde: int, M: float, n: int) -> float:
    """Closed-form achievable term for truncated-uniform placement."""
    if mtilde < M:
        raise ValueError(f"cutoff {mtilde} below cache capacity M={M}")
    if not 1 <= mtilde <= q.m:
        raise ValueError(f"cutoff {mtilde} outside [1, {q.m}]")
    if M == 0:
        return float(n)  # continuity limit of the formula as M -> 0
    G = math.fsum(q.q[:mtilde])
    if mtilde == M:
        first = 0.0
    else:
        first = (mtilde / M - 1.0) * -math.expm1(n * G * math.log1p(-M / mtilde))
    return first + n * (1.0 - G)


def rate_upper_bound(
    q: DemandDistribution, mtilde: int, M: float, n: int
) -> float:
    """Achievable rate: min of the truncated-uniform term and the expected
    distinct-file count."""
    if M >= q.m:
        return 0.0
    return min(psi_tilde(q, mtilde, M, n), mbar(q, n))


def lfu_nm_rate(q: DemandDistribution, M: float, n: int) -> float:
    """Most-popular-files caching with naive multicast of uncached requests.

    Fractional M linearly interpolates the boundary file's contribution.
    """
    if M >= q.m:
        return 0.0
    terms = []
    lo = math.floor(M)
    hi = math.ceil(M)
    for f in range(lo + 1, q.m + 1):
        qf = q.q[f - 1]
        miss = 1.0 if qf >= 1.0 else -math.expm1(n * math.log1p(-qf))
        if f == hi and hi != M:
            miss *= hi - M
        terms.append(miss)
    return math.fsum(terms)


def p1(l: int, r: float, n: int, q_l: float) -> float:
    """Concentration factor for the request count of the l-th file class."""
    cap = n * l * q_l
    if not 0.0 < r <= cap:
        raise ValueError(f"need 0 < r <= n*l*q_l = {cap}, got r={r}")
    return -math.expm1(-((cap - r) ** 2) / (2.0 * cap))


def _expected_distinct(l: int, r: float) -> float:
    # E[Z] = l (1 - (1 - 1/l)^r), distinct coupons among r draws over l bins
    if l == 1:
        return 1.0
    return l * -math.expm1(r * math.log1p(-1.0 / l))


def p2(l: int, r: float, z_tilde: float) -> float:
    """Concentration factor for the distinct-request count."""
    ez = _expected_distinct(l, r)
    if not 0.0 < z_tilde <= ez:
        raise ValueError(f"need 0 < z_tilde <= E[Z] = {ez}, got {z_tilde}")
    return -math.expm1(-((ez - z_tilde) ** 2) / (2.0 * ez))


def rate_lower_bound(
    q: DemandDistribution,
    m: int,
    M: float,
    n: int,
    grid: LowerBoundGrid | None = None,
) -> float:
    """Grid-maximized converse bound on the rate of any admissible scheme."""
    if grid is None:
        grid = LowerBoundGrid()
    if M >= m:
        return 0.0
    qa = q.as_array()
    best = 0.0
    stride = grid.stride_for(m)
    for l in range(1, m + 1, stride):
        ql = float(qa[l - 1])
        cap_r = n * l * ql
        if cap_r <= 0.0:
            continue
        # prefix maxima of z (1 - M / floor(l/z)) over z = 1..k
        vals = []
        running = -math.inf
        premax = []
        for z in range(1, l + 1):
            running = max(running, z * (1.0 - M / (l // z)))
            premax.append(running)
        rs = np.geomspace(cap_r * 1e-9, cap_r, grid.r_points)
        for r in rs:
            r = float(r)
            f1 = p1(l, r, n, ql)
            if f1 * premax[-1] <= best and f1 <= best:
                # neither branch can beat the incumbent for this r
                continue
            ez = _expected_distinct(l, r)
            cap_z = min(r, ez)
            zs = np.geomspace(cap_z * 1e-9, cap_z, grid.z_tilde_points)
            for zt in zs:
                zt = float(zt)
                if zt >= 1.0 and r >= 1.0:
                    k = min(math.ceil(min(zt, r)), l)
                    cand = f1 * p2(l, r, zt) * premax[k - 1]
                elif zt < 1.0:
                    cand = f1 * p2(l, 1.0, min(zt, 1.0)) * (1.0 - M / l)
                else:
                    continue
                if cand > best:
                    best = cand
    return max(best, 0.0)
