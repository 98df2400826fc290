"""Command-line front end: simulate / sweep / bounds / optimize-* / fixture."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import harness
from .coloring import gcc1
from .delivery import measured_rate
from .demand import DemandDistribution, zipf_distribution
from .graph import build_conflict_graph, packet_demand
from .optimizer import optimize_caching_distribution, optimize_mtilde
from .placement import SystemParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TRIAL = 3


class ConfigError(Exception):
    pass


def _parse_config_file(path: str) -> dict[str, str]:
    """Flat ``key=value`` lines; '#' starts a comment; blank lines ignored."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return out


_BOOL_KEYS = {"verify", "fix_cache", "timings"}


def _merge(args: argparse.Namespace, keys: dict[str, str]) -> dict:
    """Config-file values fill in; explicit CLI flags win."""
    merged = dict(keys)
    for name in (
        "n", "m", "M", "B", "alpha", "q", "scheme", "delivery", "trials",
        "seed", "M_sweep", "schemes", "verify", "fix_cache", "timings",
    ):
        val = getattr(args, name, None)
        if val is not None and val is not False:
            merged[name] = val
    return merged


def _require(merged: dict, key: str):
    if key not in merged:
        raise ConfigError(f"missing required setting {key!r}")
    return merged[key]


def _as_bool(val) -> bool:
    if isinstance(val, bool):
        return val
    return str(val).lower() in ("1", "true", "yes", "on")


def _build_config(merged: dict, need_sweep: bool = False) -> harness.ExperimentConfig:
    try:
        params = SystemParams(
            n=int(_require(merged, "n")),
            m=int(_require(merged, "m")),
            M=float(_require(merged, "M")) if not need_sweep else 0.0,
            B=int(_require(merged, "B")),
        )
        alpha = float(merged["alpha"]) if "alpha" in merged else None
        q = None
        if "q" in merged:
            raw = merged["q"]
            parts = raw if isinstance(raw, list) else str(raw).split(",")
            q = tuple(float(x) for x in parts)
        m_sweep = None
        if need_sweep:
            raw = _require(merged, "M_sweep")
            parts = raw if isinstance(raw, list) else str(raw).split(",")
            m_sweep = tuple(float(x) for x in parts)
            params = dataclasses.replace(params, M=m_sweep[0])
        return harness.ExperimentConfig(
            params=params,
            scheme=str(merged.get("scheme", "up")),
            delivery=str(merged.get("delivery", "gcc")),
            trials=int(merged.get("trials", 1)),
            base_seed=int(merged.get("seed", 0)),
            alpha=alpha,
            q=q,
            M_sweep=m_sweep,
            verify=_as_bool(merged.get("verify", False)),
            fix_cache=_as_bool(merged.get("fix_cache", False)),
            timings=_as_bool(merged.get("timings", False)),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def _out_stream(path: str | None):
    return open(path, "w") if path and path != "-" else sys.stdout


def _demand_dist(merged: dict) -> DemandDistribution:
    if "q" in merged:
        raw = merged["q"]
        parts = raw if isinstance(raw, list) else str(raw).split(",")
        return DemandDistribution(q=tuple(float(x) for x in parts))
    return zipf_distribution(int(_require(merged, "m")), float(_require(merged, "alpha")))


def cmd_simulate(args) -> int:
    merged = _merge(args, _parse_config_file(args.config) if args.config else {})
    config = _build_config(merged)
    records = harness.run_experiment(config)
    stream = _out_stream(args.output)
    try:
        harness.write_csv(records, stream)
    finally:
        if stream is not sys.stdout:
            stream.close()
    if args.dump_graph:
        _dump_first_graph(config, args.dump_graph)
    failures = [r for r in records if r.error or r.decode_ok is False]
    return EXIT_TRIAL if failures else EXIT_OK


def _dump_first_graph(config: harness.ExperimentConfig, path: str) -> None:
    import numpy as np

    from .demand import sample_demand_vector
    from .placement import sample_cache_configuration

    dist = config.demand_distribution()
    p, _ = config.caching_distribution(dist)
    rng_place = np.random.default_rng(harness.mix_seed(config.base_seed, 0, 1))
    cache = sample_cache_configuration(p, config.params, rng_place)
    rng_demand = np.random.default_rng(harness.mix_seed(config.base_seed, 0, 2))
    demands = sample_demand_vector(dist, config.params.n, rng_demand)
    graph = build_conflict_graph(cache, packet_demand(cache, demands, config.params))
    with open(path, "w") as fh:
        fh.write(graph.edge_list_dump())


def cmd_sweep(args) -> int:
    merged = _merge(args, _parse_config_file(args.config) if args.config else {})
    config = _build_config(merged, need_sweep=True)
    schemes = None
    if "schemes" in merged:
        raw = merged["schemes"]
        schemes = raw if isinstance(raw, list) else str(raw).split(",")
    text = harness.run_sweep(config, schemes=schemes)
    stream = _out_stream(args.output)
    try:
        stream.write(text)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK


def cmd_bounds(args) -> int:
    merged = _merge(args, _parse_config_file(args.config) if args.config else {})
    config = _build_config(merged)
    report = harness.bounds_report(config)
    print(json.dumps(dataclasses.asdict(report)))
    return EXIT_OK


def cmd_optimize_p(args) -> int:
    merged = _merge(args, _parse_config_file(args.config) if args.config else {})
    dist = _demand_dist(merged)
    result = optimize_caching_distribution(
        dist,
        float(_require(merged, "M")),
        int(_require(merged, "n")),
        budget=args.budget,
    )
    print(
        json.dumps(
            {
                "p": list(result.p.p),
                "objective": result.objective,
                "converged": result.converged,
                "evaluations": result.evaluations,
            }
        )
    )
    return EXIT_OK


def cmd_optimize_mtilde(args) -> int:
    merged = _merge(args, _parse_config_file(args.config) if args.config else {})
    dist = _demand_dist(merged)
    m = int(_require(merged, "m"))
    M = float(_require(merged, "M"))
    n = int(_require(merged, "n"))
    mt = optimize_mtilde(dist, m, M, n)
    from .bounds import rate_upper_bound

    print(
        json.dumps(
            {
                "mtilde": mt,
                "objective": rate_upper_bound(dist, mt, M, n),
                "converged": True,
            }
        )
    )
    return EXIT_OK


def cmd_fixture_example1(args) -> int:
    """Replay the fixed three-user instance end to end."""
    params, cache, demands, _p = harness.example1_fixture()
    Q = packet_demand(cache, demands, params)
    graph = build_conflict_graph(cache, Q)
    coloring = gcc1(graph)
    stream = _out_stream(args.output)
    try:
        import csv as _csv

        writer = _csv.writer(stream, lineterminator="\n")
        writer.writerow(harness.CSV_COLUMNS)
        writer.writerow(
            [
                "rap:example1", "gcc1", str(params.n), str(params.m), "",
                repr(float(params.M)), str(params.B), "", "0", "0",
                str(coloring.num_colors),
                repr(measured_rate(coloring, params.B)),
                "", "", "", "", "", "", "", "",
            ]
        )
    finally:
        if stream is not sys.stdout:
            stream.close()
    if args.dump_cache:
        with open(args.dump_cache, "w") as fh:
            fh.write(cache.to_text())
    if args.dump_graph:
        with open(args.dump_graph, "w") as fh:
            fh.write(graph.edge_list_dump())
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser, sweep: bool = False) -> None:
    sub.add_argument("--config", help="key=value config file; flags override")
    sub.add_argument("-n", type=int, help="number of users")
    sub.add_argument("-m", type=int, help="library size")
    if sweep:
        sub.add_argument("--M-sweep", dest="M_sweep", help="comma list of cache sizes")
        sub.add_argument("--schemes", help="comma list of placement schemes")
    else:
        sub.add_argument("-M", type=float, help="cache size in files")
    sub.add_argument("-B", type=int, help="packets per file")
    sub.add_argument("--alpha", type=float, help="power-law demand exponent")
    sub.add_argument("--q", help="explicit comma-separated demand pmf")
    sub.add_argument("--scheme", help="up | lfu | lfu-nm | rlfu:K | rlfu:auto | rap:FILE")
    sub.add_argument("--delivery", choices=["gcc", "gcc1", "gcc2", "exact"])
    sub.add_argument("--trials", type=int)
    sub.add_argument("--seed", type=int, help="base seed for the trial streams")
    sub.add_argument("--verify", action="store_true", default=None,
                     help="encode and decode every trial")
    sub.add_argument("--fix-cache", dest="fix_cache", action="store_true",
                     default=None, help="share one cache realization across trials")
    sub.add_argument("--timings", action="store_true", default=None,
                     help="fill elapsed_ms (output no longer byte-deterministic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codedcache",
        description="Coded-multicast caching simulator and bound calculator",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="run Monte Carlo trials at one point")
    _add_common(p)
    p.add_argument("-o", "--output", help="CSV output path (default stdout)")
    p.add_argument("--dump-graph", help="write the first trial's conflict-graph edge list")
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("sweep", help="rate-vs-cache-size sweep over schemes")
    _add_common(p, sweep=True)
    p.add_argument("-o", "--output", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("bounds", help="analytic bounds at one parameter point")
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = subs.add_parser("optimize-p", help="search the caching distribution")
    _add_common(p)
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=cmd_optimize_p)

    p = subs.add_parser("optimize-mtilde", help="best truncated-uniform cutoff")
    _add_common(p)
    p.set_defaults(func=cmd_optimize_mtilde)

    p = subs.add_parser("fixture-example1", help="replay the fixed worked instance")
    p.add_argument("-o", "--output", help="CSV output path (default stdout)")
    p.add_argument("--dump-cache", help="write the fixture cache in text form")
    p.add_argument("--dump-graph", help="write the fixture conflict-graph edge list")
    p.set_defaults(func=cmd_fixture_example1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
