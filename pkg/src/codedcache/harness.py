"""Monte Carlo experiment runner: configuration, trials, CSV persistence."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import bounds
from .coloring import Coloring, exact_chromatic, gcc, gcc1, gcc2, validate_coloring
from .delivery import Library, decode, encode, measured_rate
from .demand import DemandDistribution, sample_demand_vector, zipf_distribution
from .errors import DecodeFailure, GraphTooLarge
from .graph import build_conflict_graph, packet_demand
from .optimizer import optimize_mtilde
from .placement import (
    CachingDistribution,
    SystemParams,
    rlfu_distribution,
    sample_cache_configuration,
)

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "CSV_COLUMNS",
    "run_experiment",
    "run_sweep",
    "bounds_report",
    "example1_fixture",
]

CSV_COLUMNS = [
    "scheme",
    "delivery",
    "n",
    "m",
    "alpha",
    "M",
    "B",
    "mtilde",
    "trial",
    "seed",
    "colors",
    "rate",
    "psi",
    "mbar",
    "psi_tilde",
    "r_ub",
    "r_lb",
    "lfu_nm",
    "decode_ok",
    "elapsed_ms",
]

SWEEP_COLUMNS = [
    "scheme",
    "delivery",
    "n",
    "m",
    "alpha",
    "M",
    "B",
    "mtilde",
    "trials",
    "mean_rate",
    "stderr_rate",
    "psi",
    "mbar",
    "psi_tilde",
    "r_ub",
    "r_lb",
    "lfu_nm",
]

SCHEMES = ("up", "lfu", "lfu-nm", "rlfu", "rap")
DELIVERIES = ("gcc", "gcc1", "gcc2", "exact")

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def mix_seed(*parts: int) -> int:
    """Splittable 64-bit mix of the given integers (order-sensitive)."""
    state = 0
    for part in parts:
        state = (state + (part & _MASK) + _SPLITMIX_GAMMA) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        state = z ^ (z >> 31)
    return state


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment over a fixed parameter point (or M sweep)."""

    params: SystemParams
    scheme: str = "up"
    delivery: str = "gcc"
    trials: int = 1
    base_seed: int = 0
    alpha: float | None = None
    q: tuple[float, ...] | None = None  # explicit pmf, overrides alpha
    M_sweep: tuple[float, ...] | None = None
    verify: bool = False  # encode/decode each trial
    fix_cache: bool = False  # one shared cache realization across trials
    timings: bool = False  # populate elapsed_ms (breaks byte-determinism)
    exact_vertex_limit: int = 64

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        tag = self.scheme.split(":", 1)[0]
        if tag not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected {SCHEMES}")
        if self.delivery not in DELIVERIES:
            raise ValueError(
                f"unknown delivery {self.delivery!r}; expected {DELIVERIES}"
            )
        if self.q is None and self.alpha is None:
            raise ValueError("either alpha or an explicit pmf q is required")

    def demand_distribution(self) -> DemandDistribution:
        if self.q is not None:
            return DemandDistribution(q=self.q)
        return zipf_distribution(self.params.m, self.alpha)

    def effective_delivery(self) -> str:
        return "gcc2" if self.scheme == "lfu-nm" else self.delivery

    def caching_distribution(
        self, dist: DemandDistribution
    ) -> tuple[CachingDistribution, int | None]:
        """Resolve the placement spec into (p, mtilde-or-None)."""
        p_ = self.params
        tag, _, arg = self.scheme.partition(":")
        if tag == "up":
            return rlfu_distribution(p_.m, p_.M, p_.m), p_.m
        if tag in ("lfu", "lfu-nm"):
            mt = min(max(math.ceil(p_.M), 1), p_.m)
            return rlfu_distribution(p_.m, p_.M, mt), mt
        if tag == "rlfu":
            if arg == "auto":
                mt = optimize_mtilde(dist, p_.m, p_.M, p_.n)
            else:
                mt = int(arg)
            return rlfu_distribution(p_.m, p_.M, mt), mt
        # rap:<path to JSON list of memory fractions>
        with open(arg) as fh:
            vec = json.load(fh)
        return CachingDistribution(p=tuple(float(x) for x in vec)), None


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row; analytic fields are shared across a config's trials."""

    config: ExperimentConfig
    trial: int
    seed: int
    colors: int | None
    rate: float | None
    mtilde: int | None
    analytics: dict = field(default_factory=dict)
    decode_ok: bool | None = None
    error: str | None = None
    elapsed_ms: int | None = None

    def to_row(self) -> list[str]:
        c = self.config

        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            if isinstance(x, float):
                return repr(x)
            return str(x)

        a = self.analytics
        return [
            c.scheme,
            c.effective_delivery(),
            str(c.params.n),
            str(c.params.m),
            fmt(c.alpha),
            fmt(float(c.params.M)),
            str(c.params.B),
            fmt(self.mtilde),
            str(self.trial),
            str(self.seed),
            fmt(self.colors),
            fmt(self.rate),
            fmt(a.get("psi")),
            fmt(a.get("mbar")),
            fmt(a.get("psi_tilde")),
            fmt(a.get("r_ub")),
            fmt(a.get("r_lb")),
            fmt(a.get("lfu_nm")),
            fmt(self.decode_ok),
            fmt(self.elapsed_ms),
        ]


def _color(graph, delivery: str, limit: int) -> Coloring:
    if delivery == "gcc":
        return gcc(graph)
    if delivery == "gcc1":
        return gcc1(graph)
    if delivery == "gcc2":
        return gcc2(graph)
    return exact_chromatic(graph, vertex_limit=limit)


def config_analytics(
    config: ExperimentConfig,
    dist: DemandDistribution,
    p: CachingDistribution,
    mtilde: int | None,
) -> dict:
    """Analytic bound values computed once per parameter point."""
    prm = config.params
    out = {
        "psi": bounds.psi(dist, p, prm.M, prm.n),
        "mbar": bounds.mbar(dist, prm.n),
        "r_lb": bounds.rate_lower_bound(dist, prm.m, prm.M, prm.n),
        "lfu_nm": bounds.lfu_nm_rate(dist, prm.M, prm.n),
    }
    if mtilde is not None:
        out["psi_tilde"] = bounds.psi_tilde(dist, mtilde, prm.M, prm.n)
        out["r_ub"] = bounds.rate_upper_bound(dist, mtilde, prm.M, prm.n)
    return out


def run_experiment(
    config: ExperimentConfig, analytics: dict | None = None
) -> list[TrialRecord]:
    """Run all trials of one config; deterministic for a fixed config."""
    prm = config.params
    dist = config.demand_distribution()
    p, mtilde = config.caching_distribution(dist)
    if analytics is None:
        analytics = config_analytics(config, dist, p, mtilde)
    delivery = config.effective_delivery()

    library = None
    if config.verify:
        library = Library.random(
            prm.m, prm.B, packet_len=prm.packet_bits // 8, seed=config.base_seed
        )

    fixed_cache = None
    if config.fix_cache:
        rng = np.random.default_rng(mix_seed(config.base_seed, 0, 1))
        fixed_cache = sample_cache_configuration(p, prm, rng)

    records = []
    for trial in range(config.trials):
        seed = mix_seed(config.base_seed, trial)
        started = time.perf_counter()
        try:
            if fixed_cache is not None:
                cache = fixed_cache
            else:
                rng_place = np.random.default_rng(mix_seed(config.base_seed, trial, 1))
                cache = sample_cache_configuration(p, prm, rng_place)
            rng_demand = np.random.default_rng(mix_seed(config.base_seed, trial, 2))
            demands = sample_demand_vector(dist, prm.n, rng_demand)
            Q = packet_demand(cache, demands, prm)
            graph = build_conflict_graph(cache, Q)
            coloring = _color(graph, delivery, config.exact_vertex_limit)
            decode_ok = None
            if config.verify:
                validate_coloring(graph, coloring)
                codeword = encode(coloring, graph, library)
                decode_ok = True
                for u in range(1, prm.n + 1):
                    got = decode(u, codeword, cache, library, Q)
                    for ident, payload in got.items():
                        if payload != library.packet(*ident):
                            decode_ok = False
            elapsed = int((time.perf_counter() - started) * 1000)
            records.append(
                TrialRecord(
                    config=config,
                    trial=trial,
                    seed=seed,
                    colors=coloring.num_colors,
                    rate=measured_rate(coloring, prm.B),
                    mtilde=mtilde,
                    analytics=analytics,
                    decode_ok=decode_ok,
                    elapsed_ms=elapsed if config.timings else None,
                )
            )
        except (GraphTooLarge, DecodeFailure) as exc:
            records.append(
                TrialRecord(
                    config=config,
                    trial=trial,
                    seed=seed,
                    colors=None,
                    rate=None,
                    mtilde=mtilde,
                    analytics=analytics,
                    decode_ok=False,
                    error=str(exc),
                )
            )
    return records


def write_csv(records: list[TrialRecord], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.to_row())


def run_sweep(config: ExperimentConfig, schemes: list[str] | None = None) -> str:
    """Run every (M, scheme) pair and return the aggregate CSV text."""
    if not config.M_sweep:
        raise ValueError("sweep requires a non-empty M_sweep")
    schemes = schemes or [config.scheme]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for scheme in schemes:
        for M in config.M_sweep:
            cfg = replace(
                config,
                scheme=scheme,
                params=replace(config.params, M=M),
                M_sweep=None,
            )
            dist = cfg.demand_distribution()
            p, mtilde = cfg.caching_distribution(dist)
            analytics = config_analytics(cfg, dist, p, mtilde)
            records = run_experiment(cfg, analytics=analytics)
            rates = [r.rate for r in records if r.rate is not None]
            mean = sum(rates) / len(rates) if rates else None
            if rates and len(rates) > 1:
                var = sum((x - mean) ** 2 for x in rates) / (len(rates) - 1)
                stderr = math.sqrt(var / len(rates))
            else:
                stderr = 0.0 if rates else None

            def fmt(x):
                if x is None:
                    return ""
                return repr(float(x)) if isinstance(x, float) else str(x)

            writer.writerow(
                [
                    scheme,
                    cfg.effective_delivery(),
                    str(cfg.params.n),
                    str(cfg.params.m),
                    fmt(cfg.alpha),
                    fmt(float(M)),
                    str(cfg.params.B),
                    fmt(mtilde),
                    str(len(rates)),
                    fmt(mean),
                    fmt(stderr),
                    fmt(analytics.get("psi")),
                    fmt(analytics.get("mbar")),
                    fmt(analytics.get("psi_tilde")),
                    fmt(analytics.get("r_ub")),
                    fmt(analytics.get("r_lb")),
                    fmt(analytics.get("lfu_nm")),
                ]
            )
    return out.getvalue()


def bounds_report(config: ExperimentConfig) -> bounds.BoundsReport:
    """Analytic bounds for the config's parameter point."""
    prm = config.params
    dist = config.demand_distribution()
    p, mtilde = config.caching_distribution(dist)
    if prm.M >= prm.m:
        return bounds.BoundsReport(
            psi=0.0, mbar=bounds.mbar(dist, prm.n), r_lb=0.0, lfu_nm=0.0,
            psi_tilde=0.0, r_ub=0.0,
        )
    a = config_analytics(config, dist, p, mtilde)
    return bounds.BoundsReport(
        psi=a["psi"],
        mbar=a["mbar"],
        r_lb=a["r_lb"],
        lfu_nm=a["lfu_nm"],
        psi_tilde=a.get("psi_tilde"),
        r_ub=a.get("r_ub"),
        lfu_nm_interpolated=prm.M != int(prm.M),
    )


EXAMPLE1_CACHE_TEXT = """\
1 1 1,2
1 2 1
1 3
2 1 1,3
2 2 2
2 3
3 1 1,2
3 2 3
3 3
"""

EXAMPLE1_DEMANDS = (1, 2, 3)


def example1_fixture():
    """The fixed three-user instance used as a golden test.

    Returns (params, cache, demands, p).
    """
    from .demand import DemandVector
    from .placement import CacheConfiguration

    params = SystemParams(n=3, m=3, M=1.0, B=3)
    cache = CacheConfiguration.from_text(EXAMPLE1_CACHE_TEXT, B=3)
    demands = DemandVector(entries=EXAMPLE1_DEMANDS)
    p = CachingDistribution(p=(2 / 3, 1 / 3, 0.0))
    return params, cache, demands, p
