"""Placement optimization: the truncated-uniform cutoff (search, closed
form, and regime prescription) and direct caching-distribution search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import mbar, psi, rate_upper_bound
from .demand import DemandDistribution
from .placement import CachingDistribution, rlfu_distribution

__all__ = [
    "RegimeReport",
    "OptimizationResult",
    "optimize_mtilde",
    "mtilde_closed_form_alpha_lt1",
    "regime_mtilde",
    "optimize_caching_distribution",
]


@dataclass(frozen=True)
class RegimeReport:
    """Cutoff prescription from the asymptotic case analysis.

    Finite inputs are classified with explicit comparator surrogates (for
    example "n grows slower than m^alpha" becomes n < m^alpha); the
    rationale spells out the comparison used. The exhaustive search is the
    authoritative finite-size choice; this report is advisory.
    """

    regime: str
    mtilde: int
    rationale: str


@dataclass(frozen=True)
class OptimizationResult:
    p: CachingDistribution
    objective: float
    converged: bool
    evaluations: int


def optimize_mtilde(q: DemandDistribution, m: int, M: float, n: int) -> int:
    """Exhaustive scan of the cutoff minimizing the achievable upper bound.

    Ties break to the smallest cutoff. O(m) closed-form evaluations.
    """
    if M > m:
        raise ValueError(f"cache capacity M={M} exceeds library size {m}")
    lo = max(math.ceil(M), 1)
    if M >= m:
        return m
    mt = np.arange(lo, m + 1, dtype=float)
    G = np.cumsum(q.as_array())[lo - 1 :]
    if M == 0:
        psi_t = np.full_like(mt, float(n))
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            # the mt == M branch hits log1p(-1); np.where discards it
            first = np.where(
                mt > M,
                (mt / M - 1.0)
                * -np.expm1(n * G * np.log1p(-np.minimum(M / mt, 1.0))),
                0.0,
            )
        psi_t = first + n * (1.0 - G)
    r_ub = np.minimum(psi_t, mbar(q, n))
    return int(lo + int(np.argmin(r_ub)))


def mtilde_closed_form_alpha_lt1(n: int, m: int, M: float, alpha: float) -> int:
    """Continuous-relaxation cutoff for power-law demands with alpha < 1."""
    if not 0 <= alpha < 1:
        raise ValueError(f"closed form requires 0 <= alpha < 1, got {alpha}")
    if alpha == 0:
        return m  # uniform demand: uniform placement
    inner = (n * (1.0 - alpha) * M / m) ** (1.0 / alpha) * m
    return round(min(max(inner, M), m))


def _clamp(mtilde: float, M: float, m: int) -> int:
    return int(min(max(math.ceil(mtilde), max(math.ceil(M), 1)), m))


def regime_mtilde(
    n: int, m: int, M: float, alpha: float, rho: float | None = None
) -> RegimeReport:
    """Order-optimal cutoff per the asymptotic case analysis.

    ``rho`` asserts the proportionality constant of the n-comparable-to-
    m^alpha regime; when omitted, the regime is inferred by direct
    threshold comparison of the finite inputs.
    """
    if alpha == 1:
        raise ValueError("alpha = 1 is outside the supported case analysis")
    if alpha < 1:
        return RegimeReport(
            regime="alpha<1",
            mtilde=_clamp(m, M, m),
            rationale="heavy-tailed demand: full-support uniform placement "
            "is order-optimal for every n, M",
        )

    malpha = m**alpha
    if rho is not None:
        if rho >= 1:
            return RegimeReport(
                regime="alpha>1, n=Theta(m^alpha), rho>=1",
                mtilde=_clamp(m, M, m),
                rationale=f"rho={rho} >= 1 behaves like n growing faster "
                "than m^alpha: uniform placement",
            )
        if M < 1:
            mt = rho ** (1.0 / alpha) * m
            label = "alpha>1, n=Theta(m^alpha), 0<rho<1, M<1"
        elif M < 1.0 / rho:
            mt = (rho * M) ** (1.0 / alpha) * m
            label = "alpha>1, n=Theta(m^alpha), 0<rho<1, 1<=M<1/rho"
        else:
            mt = m
            label = "alpha>1, n=Theta(m^alpha), 0<rho<1, M>=1/rho"
        return RegimeReport(
            regime=label,
            mtilde=_clamp(mt, M, m),
            rationale=f"cutoff scales as rho- and M-weighted fraction of the "
            f"library (rho={rho}, surrogate comparisons on finite inputs)",
        )

    if n >= malpha:
        return RegimeReport(
            regime="alpha>1, n>=m^alpha",
            mtilde=_clamp(m, M, m),
            rationale=f"n={n} >= m^alpha={malpha:.4g}: aggregate demand "
            "flattens, uniform placement",
        )
    # n = o(m^alpha) surrogate: n < m^alpha
    if M >= malpha / n:
        return RegimeReport(
            regime="alpha>1, n<m^alpha, M>=m^alpha/n",
            mtilde=_clamp(m, M, m),
            rationale=f"M={M} >= m^alpha/n={malpha / n:.4g}: cache large "
            "enough that uniform placement is order-optimal",
        )
    if M < 1:
        return RegimeReport(
            regime="alpha>1, n<m^alpha, M<1",
            mtilde=_clamp(n ** (1.0 / alpha), M, m),
            rationale="small caches: cutoff n^(1/alpha); caching yields no "
            "order gain over multicast-plus-unicast here",
        )
    if M > n ** (1.0 / (alpha - 1)) and n < m ** (alpha - 1):
        return RegimeReport(
            regime="alpha>1, n<m^(alpha-1), M large",
            mtilde=_clamp(M, M, m),
            rationale=f"M={M} above the n^(1/(alpha-1)) threshold with few "
            "users: cache the M most popular files and multicast the rest; "
            "near the threshold the boundary analysis admits either this or "
            "the (M n)^(1/alpha) cutoff",
        )
    return RegimeReport(
        regime="alpha>1, n<m^alpha, 1<=M moderate",
        mtilde=_clamp((M * n) ** (1.0 / alpha), M, m),
        rationale="popularity-weighted cutoff (M n)^(1/alpha): caching by "
        "popularity gives an order gain over uniform placement",
    )


def _simplex_grid(m: int, steps: int, cap: float):
    """Compositions of ``steps`` into m parts, scaled to the simplex, with
    every coordinate at most ``cap``. Lexicographic order."""
    comp = [0] * m

    def rec(i: int, left: int):
        if i == m - 1:
            if left / steps <= cap + 1e-12:
                comp[i] = left
                yield tuple(c / steps for c in comp)
            return
        top = min(left, int(cap * steps + 1e-9))
        for c in range(top + 1):
            comp[i] = c
            yield from rec(i + 1, left - c)

    yield from rec(0, steps)


def optimize_caching_distribution(
    q: DemandDistribution,
    M: float,
    n: int,
    budget: int = 20000,
    rng: np.random.Generator | None = None,
) -> OptimizationResult:
    """Minimize the achievable-rate objective over feasible caching
    distributions.

    Coarse simplex grid (step 1/24) seeded with the truncated-uniform
    family, then pairwise mass-transfer descent with a halving step.
    Deterministic for a fixed budget. Intended for small libraries.
    """
    m = q.m
    cap = 1.0 if M <= 1 else 1.0 / M
    evaluations = 0
    mbar_val = mbar(q, n)

    def objective(p: CachingDistribution) -> float:
        nonlocal evaluations
        evaluations += 1
        return min(psi(q, p, M, n), mbar_val)

    if m == 1:
        p = CachingDistribution(p=(1.0,))
        return OptimizationResult(p, objective(p), True, evaluations)

    best_p = None
    best_obj = math.inf

    def consider(p_vec: tuple[float, ...]) -> bool:
        nonlocal best_p, best_obj
        try:
            p = CachingDistribution(p=p_vec)
        except ValueError:
            return False
        if any(x > cap + 1e-12 for x in p_vec):
            return False
        val = objective(p)
        if val < best_obj - 1e-12:
            best_p, best_obj = p, val
            return True
        return False

    # truncated-uniform seeds
    for mt in range(max(math.ceil(M), 1), m + 1):
        consider(rlfu_distribution(m, M, mt).p)

    converged = True
    for p_vec in _simplex_grid(m, 24, cap):
        if evaluations >= budget:
            converged = False
            break
        consider(p_vec)

    # pairwise mass transfer, halving epsilon
    eps = 1.0 / 24
    while eps >= 1e-4 and evaluations < budget:
        improved = True
        while improved and evaluations < budget:
            improved = False
            base = list(best_p.p)
            for i in range(m):
                for j in range(m):
                    if i == j or base[i] < eps:
                        continue
                    cand = list(base)
                    cand[i] -= eps
                    cand[j] += eps
                    if cand[j] > cap + 1e-12:
                        continue
                    if consider(tuple(cand)):
                        improved = True
                        base = list(best_p.p)
                    if evaluations >= budget:
                        break
                if evaluations >= budget:
                    break
        eps /= 2.0
    if evaluations >= budget and eps >= 1e-4:
        converged = False
    return OptimizationResult(best_p, best_obj, converged, evaluations)
