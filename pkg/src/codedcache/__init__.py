"""Coded-multicast caching over a shared link: random fractional placement,
conflict-graph coloring delivery, analytic rate bounds, and placement
optimization, with a Monte Carlo harness tying them together."""

from .bounds import (
    BoundsReport,
    LowerBoundGrid,
    lfu_nm_rate,
    mbar,
    psi,
    psi_tilde,
    rate_lower_bound,
    rate_upper_bound,
)
from .coloring import Coloring, exact_chromatic, gcc, gcc1, gcc2, validate_coloring
from .delivery import Codeword, Library, decode, encode, measured_rate
from .demand import DemandDistribution, DemandVector, sample_demand_vector, zipf_distribution
from .errors import ConstraintViolation, DecodeFailure, GraphTooLarge
from .graph import ConflictGraph, PacketDemand, Vertex, build_conflict_graph, packet_demand
from .harness import ExperimentConfig, TrialRecord, bounds_report, run_experiment, run_sweep
from .optimizer import (
    OptimizationResult,
    RegimeReport,
    optimize_caching_distribution,
    optimize_mtilde,
    regime_mtilde,
)
from .placement import (
    CacheConfiguration,
    CachingDistribution,
    SystemParams,
    rlfu_distribution,
    sample_cache_configuration,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "LowerBoundGrid",
    "CacheConfiguration",
    "CachingDistribution",
    "Codeword",
    "Coloring",
    "ConflictGraph",
    "ConstraintViolation",
    "DecodeFailure",
    "DemandDistribution",
    "DemandVector",
    "ExperimentConfig",
    "GraphTooLarge",
    "Library",
    "OptimizationResult",
    "PacketDemand",
    "RegimeReport",
    "SystemParams",
    "TrialRecord",
    "Vertex",
    "bounds_report",
    "build_conflict_graph",
    "decode",
    "encode",
    "exact_chromatic",
    "gcc",
    "gcc1",
    "gcc2",
    "lfu_nm_rate",
    "mbar",
    "measured_rate",
    "optimize_caching_distribution",
    "optimize_mtilde",
    "packet_demand",
    "psi",
    "psi_tilde",
    "rate_lower_bound",
    "rate_upper_bound",
    "regime_mtilde",
    "rlfu_distribution",
    "run_experiment",
    "run_sweep",
    "sample_cache_configuration",
    "sample_demand_vector",
    "validate_coloring",
    "zipf_distribution",
]
