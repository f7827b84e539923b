"""K-means, centroid-encoded PSO clustering, the K-means-seeded hybrid, and cluster metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .numerics import make_rng
from .objectives import ObjectiveSense
from .swarm import SwarmConfig, optimize

__all__ = [
    "ClusteringProblem",
    "ClusteringResult",
    "assign_to_nearest",
    "recompute_centroids",
    "kmeans",
    "sse",
    "quantization_error",
    "inter_cluster_distance",
    "encode",
    "decode",
    "pso_cluster",
    "hybrid_pso_cluster",
]


@dataclass(frozen=True, eq=False)
class ClusteringProblem:
    data: np.ndarray
    num_clusters: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] == 0:
            raise ValueError(f"data must be a non-empty (N_o, N_d) array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("data contains NaN or Inf")
        if not 1 <= self.num_clusters <= data.shape[0]:
            raise ValueError(f"num_clusters must lie in [1, {data.shape[0]}], got {self.num_clusters}")
        object.__setattr__(self, "data", data)

    @property
    def n_points(self) -> int:
        return self.data.shape[0]

    @property
    def n_features(self) -> int:
        return self.data.shape[1]

    @property
    def feature_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.data.min(axis=0), self.data.max(axis=0)


@dataclass(eq=False)
class ClusteringResult:
    centroids: np.ndarray
    assignment: np.ndarray
    quantization_error: float
    inter_cluster_distance: float
    iterations_run: int
    # best-so-far J_e per PSO iteration, or J_e after each K-means update
    trace: list[float] = field(default_factory=list)
    # K-means only: sum of squared distances after each update
    sse_trace: list[float] = field(default_factory=list)


def _distances(data: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = data[:, None, :] - centroids[None, :, :]
    return np.sqrt(np.einsum("pcd,pcd->pc", diff, diff))


def assign_to_nearest(data, centroids) -> np.ndarray:
    """Index of the nearest centroid for every point; ties go to the lowest index."""
    data = np.asarray(data, dtype=np.float64)
    centroids = np.asarray(centroids, dtype=np.float64)
    if centroids.ndim != 2 or centroids.shape[0] == 0:
        raise ValueError("need at least one centroid")
    if data.shape[1] != centroids.shape[1]:
        raise ValueError(f"dimension mismatch: data has {data.shape[1]} features, centroids {centroids.shape[1]}")
    return np.argmin(_distances(data, centroids), axis=1)


def recompute_centroids(data, assignment, num_clusters: int, rng: np.random.Generator) -> np.ndarray:
    """Cluster means; an empty cluster is re-seeded at a uniformly drawn data point."""
    data = np.asarray(data, dtype=np.float64)
    assignment = np.asarray(assignment)
    counts = np.bincount(assignment, minlength=num_clusters)
    sums = np.zeros((num_clusters, data.shape[1]))
    np.add.at(sums, assignment, data)
    centroids = np.empty_like(sums)
    filled = counts > 0
    centroids[filled] = sums[filled] / counts[filled, None]
    for j in np.flatnonzero(~filled):
        centroids[j] = data[rng.integers(data.shape[0])]
    return centroids


def sse(data, centroids, assignment) -> float:
    data = np.asarray(data, dtype=np.float64)
    diff = data - np.asarray(centroids)[np.asarray(assignment)]
    return float(np.sum(diff * diff))


def quantization_error(data, centroids, assignment) -> float:
    """Mean over clusters of the mean member-to-centroid distance; empty clusters add 0."""
    data = np.asarray(data, dtype=np.float64)
    centroids = np.asarray(centroids, dtype=np.float64)
    assignment = np.asarray(assignment)
    n_c = centroids.shape[0]
    dist = np.sqrt(np.sum((data - centroids[assignment]) ** 2, axis=1))
    totals = np.bincount(assignment, weights=dist, minlength=n_c)
    counts = np.bincount(assignment, minlength=n_c)
    per_cluster = np.divide(totals, counts, out=np.zeros(n_c), where=counts > 0)
    return float(per_cluster.sum() / n_c)


def inter_cluster_distance(centroids) -> float:
    """Mean distance over all unordered centroid pairs (0 for a single centroid)."""
    centroids = np.asarray(centroids, dtype=np.float64)
    n_c = centroids.shape[0]
    if n_c < 2:
        return 0.0
    i, j = np.triu_indices(n_c, k=1)
    return float(np.mean(np.sqrt(np.sum((centroids[i] - centroids[j]) ** 2, axis=1))))


def encode(centroids) -> np.ndarray:
    return np.asarray(centroids, dtype=np.float64).reshape(-1).copy()


def decode(position, num_clusters: int, num_features: int) -> np.ndarray:
    position = np.asarray(position, dtype=np.float64)
    if position.ndim != 1 or position.size != num_clusters * num_features:
        raise ValueError(
            f"position of length {position.size} cannot hold {num_clusters} centroids of dimension {num_features}"
        )
    return position.reshape(num_clusters, num_features).copy()


def _result(data, centroids, iterations: int, trace=(), sse_trace=()) -> ClusteringResult:
    assignment = assign_to_nearest(data, centroids)
    return ClusteringResult(
        centroids=centroids,
        assignment=assignment,
        quantization_error=quantization_error(data, centroids, assignment),
        inter_cluster_distance=inter_cluster_distance(centroids),
        iterations_run=iterations,
        trace=list(trace),
        sse_trace=list(sse_trace),
    )


def kmeans(problem: ClusteringProblem, max_iterations: int, seed: Optional[int] = None, *,
           rng: Optional[np.random.Generator] = None) -> ClusteringResult:
    """Lloyd iterations from N_c distinct data points; stops early once no point changes cluster."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    rng = rng if rng is not None else make_rng(seed)
    data, k = problem.data, problem.num_clusters
    centroids = data[rng.choice(problem.n_points, size=k, replace=False)].copy()
    assignment = assign_to_nearest(data, centroids)
    trace, sse_trace = [], []
    iterations = 0
    for _ in range(max_iterations):
        centroids = recompute_centroids(data, assignment, k, rng)
        iterations += 1
        sse_trace.append(sse(data, centroids, assignment))
        new_assignment = assign_to_nearest(data, centroids)
        trace.append(quantization_error(data, centroids, new_assignment))
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    return _result(data, centroids, iterations, trace, sse_trace)


class _QuantizationFitness:
    """Batch J_e of encoded centroid sets; picklable for process pools."""

    def __init__(self, data: np.ndarray, num_clusters: int):
        self.data = data
        self.k = num_clusters

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        data, k = self.data, self.k
        centroids = positions.reshape(positions.shape[0], k, data.shape[1])
        out = np.empty(positions.shape[0])
        for i, c in enumerate(centroids):
            out[i] = quantization_error(data, c, np.argmin(_distances(data, c), axis=1))
        return out


def _sample_centroid_sets(data: np.ndarray, k: int, rng: np.random.Generator, count: int) -> np.ndarray:
    return np.stack([data[rng.choice(data.shape[0], size=k, replace=False)].reshape(-1) for _ in range(count)])


def _velocity_limit(problem: ClusteringProblem) -> np.ndarray:
    lo, hi = problem.feature_bounds
    span = hi - lo
    # a constant feature still needs a positive limit
    span = np.where(span > 0, span, 1.0)
    return np.tile(span, problem.num_clusters)


def _cluster_config(problem: ClusteringProblem, config: SwarmConfig) -> SwarmConfig:
    if config.sense is not ObjectiveSense.MINIMIZE:
        raise ValueError("PSO clustering minimizes quantization error; config.sense must be 'min'")
    return config.with_(max_velocity=tuple(_velocity_limit(problem)), confine_to_box=False)


def _run_swarm(problem: ClusteringProblem, config: SwarmConfig, rng: np.random.Generator,
               seed_position: Optional[np.ndarray]) -> ClusteringResult:
    data, k = problem.data, problem.num_clusters
    config = _cluster_config(problem, config)
    lo, hi = problem.feature_bounds

    def initializer(rng: np.random.Generator, size: int) -> np.ndarray:
        if seed_position is None:
            return _sample_centroid_sets(data, k, rng, size)
        return np.vstack([seed_position, _sample_centroid_sets(data, k, rng, size - 1)])

    res = optimize(_QuantizationFitness(data, k), np.tile(lo, k), np.tile(np.where(hi > lo, hi, lo + 1.0), k),
                   config, seed=0, vectorized=True, initializer=initializer, rng=rng)
    return _result(data, decode(res.best_position, k, problem.n_features), config.iterations, res.fitness_trace)


def pso_cluster(problem: ClusteringProblem, config: SwarmConfig, seed: Optional[int] = None, *,
                rng: Optional[np.random.Generator] = None) -> ClusteringResult:
    """Swarm search over encoded centroid sets with quantization error as fitness.

    Each particle starts from N_c distinct data points; velocities are limited
    per feature by that feature's data range.
    """
    rng = rng if rng is not None else make_rng(seed)
    return _run_swarm(problem, config, rng, None)


def hybrid_pso_cluster(problem: ClusteringProblem, config: SwarmConfig, kmeans_iterations: int,
                       seed: Optional[int] = None, *, rng: Optional[np.random.Generator] = None) -> ClusteringResult:
    """PSO clustering with particle 0 started at a completed K-means solution.

    K-means draws from the stream first. With ``config.iterations == 0`` the
    K-means result is returned unchanged.
    """
    rng = rng if rng is not None else make_rng(seed)
    seeded = kmeans(problem, kmeans_iterations, rng=rng)
    if config.iterations == 0:
        return seeded
    return _run_swarm(problem, config, rng, encode(seeded.centroids))
