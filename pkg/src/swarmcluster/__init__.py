"""Particle swarm optimization for benchmark functions and data clustering."""

from .clustering import (
    ClusteringProblem,
    ClusteringResult,
    hybrid_pso_cluster,
    inter_cluster_distance,
    kmeans,
    pso_cluster,
    quantization_error,
)
from .data import Dataset, generate_artificial, load_builtin, load_delimited, min_max_normalize
from .harness import ExperimentReport, ExperimentSpec, emit_report, run_experiment
from .objectives import BenchmarkSpec, ObjectiveSense
from .swarm import OptimizationResult, SwarmConfig, Topology, optimize, optimize_benchmark

__version__ = "0.1.0"
