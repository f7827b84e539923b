"""Repeated seeded runs, budget accounting and report output (JSON, CSV, text table)."""

from __future__ import annotations

import csv
import enum
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional, Sequence

from .clustering import ClusteringProblem, hybrid_pso_cluster, kmeans, pso_cluster
from .data import Dataset, generate_artificial, load_builtin, load_delimited, min_max_normalize
from .numerics import SummaryStats, run_seed, summarize
from .objectives import TABLE_ITERATIONS, BenchmarkSpec, ObjectiveSense
from .swarm import SwarmConfig, Topology, optimize_benchmark

__all__ = [
    "Task",
    "ALGORITHMS",
    "ExperimentSpec",
    "RunRecord",
    "ExperimentReport",
    "ExperimentError",
    "pso_iterations",
    "kmeans_iterations",
    "run_experiment",
    "emit_report",
    "format_comparison",
]

KMEANS_ITERATION_CAP = 1000


class ExperimentError(ValueError):
    pass


class Task(str, enum.Enum):
    OPTIMIZE = "optimize"
    CLUSTER = "cluster"


ALGORITHMS = {
    "kmeans": None,
    "pso-gbest": "gbest",
    "pso-lbest-ring": "ring",
    "pso-lbest-vn": "vonneumann",
    "pso-hybrid": None,
}

METRIC_SENSE = {
    "quantization_error": ObjectiveSense.MINIMIZE,
    "inter_cluster_distance": ObjectiveSense.MAXIMIZE,
}


@dataclass(frozen=True)
class ExperimentSpec:
    task: Task
    algorithm: str
    runs: int = 30
    base_seed: int = 0
    swarm_size: int = 10
    # function optimization
    function: Optional[str] = None
    dimension: Optional[int] = None
    sense: ObjectiveSense = ObjectiveSense.MAXIMIZE
    confine_to_box: bool = True
    # clustering
    dataset: Optional[str] = None          # file path, "artificial", or "builtin:<name>"
    dataset_options: dict = field(default_factory=dict)
    num_clusters: Optional[int] = None
    evaluation_budget: int = 1000
    normalize: bool = False
    artificial_size: int = 400
    artificial_seed: int = 0
    hybrid_topology: str = "gbest"
    # explicit overrides of the budget-derived counts
    iterations: Optional[int] = None
    kmeans_iterations: Optional[int] = None
    w_start: float = 0.9
    w_end: float = 0.4
    c1: float = 1.042
    c2: float = 1.042

    def __post_init__(self):
        object.__setattr__(self, "task", Task(self.task))
        object.__setattr__(self, "sense", ObjectiveSense(self.sense))
        if self.algorithm not in ALGORITHMS:
            raise ExperimentError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.runs < 1:
            raise ExperimentError("runs must be at least 1")
        if self.task is Task.OPTIMIZE:
            if self.algorithm in ("kmeans", "pso-hybrid"):
                raise ExperimentError(f"{self.algorithm} does not apply to function optimization")
            if self.function is None or self.dimension is None:
                raise ExperimentError("function optimization needs a function and a dimension")
        else:
            if self.dataset is None or self.num_clusters is None:
                raise ExperimentError("clustering needs a dataset and a cluster count")
            if self.algorithm != "kmeans" and self.iterations is None and self.evaluation_budget < self.swarm_size:
                raise ExperimentError(
                    f"evaluation budget {self.evaluation_budget} is smaller than the swarm size {self.swarm_size}"
                )

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, enum.Enum) else value
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        return cls(**d)


@dataclass
class RunRecord:
    run: int
    seed: int
    metrics: dict[str, float]
    evaluations: int
    iterations: int
    runtime_s: float = 0.0


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    records: list[RunRecord]
    aggregates: dict[str, SummaryStats]

    def to_dict(self, include_timing: bool = True) -> dict:
        records = []
        for r in self.records:
            rec = asdict(r)
            if not include_timing:
                rec.pop("runtime_s")
            records.append(rec)
        return {
            "spec": self.spec.to_dict(),
            "records": records,
            "aggregates": {k: v.to_dict() for k, v in self.aggregates.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(
            spec=ExperimentSpec.from_dict(d["spec"]),
            records=[RunRecord(**r) for r in d["records"]],
            aggregates={k: SummaryStats(**v) for k, v in d["aggregates"].items()},
        )

    def values(self, metric: str) -> list[float]:
        return [r.metrics[metric] for r in self.records]


def pso_iterations(spec: ExperimentSpec) -> int:
    if spec.iterations is not None:
        return spec.iterations
    if spec.task is Task.OPTIMIZE:
        return TABLE_ITERATIONS.get(spec.dimension, 1000)
    return spec.evaluation_budget // spec.swarm_size


def kmeans_iterations(spec: ExperimentSpec) -> int:
    if spec.kmeans_iterations is not None:
        return spec.kmeans_iterations
    return min(spec.evaluation_budget, KMEANS_ITERATION_CAP)


def resolve_dataset(spec: ExperimentSpec) -> Dataset:
    ref = spec.dataset
    if ref == "artificial":
        ds = generate_artificial(spec.artificial_size, spec.artificial_seed)
    elif ref.startswith("builtin:"):
        ds = load_builtin(ref.split(":", 1)[1])
    else:
        ds = load_delimited(ref, **spec.dataset_options)
    return min_max_normalize(ds) if spec.normalize else ds


def _swarm_config(spec: ExperimentSpec, topology: str, max_velocity, sense: ObjectiveSense,
                  confine: bool) -> SwarmConfig:
    return SwarmConfig(
        swarm_size=spec.swarm_size,
        iterations=pso_iterations(spec),
        max_velocity=max_velocity,
        sense=sense,
        topology=Topology.parse(topology),
        w_start=spec.w_start,
        w_end=spec.w_end,
        c1=spec.c1,
        c2=spec.c2,
        confine_to_box=confine,
    )


def _run_once(spec: ExperimentSpec, run_index: int, dataset: Optional[Dataset]) -> RunRecord:
    seed = run_seed(spec.base_seed, run_index)
    start = time.perf_counter()
    if spec.task is Task.OPTIMIZE:
        bench = BenchmarkSpec.default(spec.function, spec.dimension)
        config = _swarm_config(spec, ALGORITHMS[spec.algorithm], bench.max_velocity, spec.sense, spec.confine_to_box)
        res = optimize_benchmark(bench, config, seed)
        metrics = {"fitness": res.best_fitness}
        evaluations, iterations = res.evaluations_used, config.iterations
    else:
        problem = ClusteringProblem(dataset.vectors, spec.num_clusters)
        if spec.algorithm == "kmeans":
            res = kmeans(problem, kmeans_iterations(spec), seed)
            evaluations = iterations = res.iterations_run
        else:
            # max_velocity is replaced by per-feature data ranges inside the clustering driver
            topo = spec.hybrid_topology if spec.algorithm == "pso-hybrid" else ALGORITHMS[spec.algorithm]
            config = _swarm_config(spec, topo, 1.0, ObjectiveSense.MINIMIZE, False)
            if spec.algorithm == "pso-hybrid":
                res = hybrid_pso_cluster(problem, config, kmeans_iterations(spec), seed)
            else:
                res = pso_cluster(problem, config, seed)
            iterations = config.iterations
            evaluations = spec.swarm_size * (config.iterations + 1)
        metrics = {"quantization_error": res.quantization_error,
                   "inter_cluster_distance": res.inter_cluster_distance}
    return RunRecord(run_index, seed, metrics, evaluations, iterations, time.perf_counter() - start)


def _metric_sense(spec: ExperimentSpec, metric: str) -> ObjectiveSense:
    return spec.sense if metric == "fitness" else METRIC_SENSE[metric]


def aggregate(spec: ExperimentSpec, records: Sequence[RunRecord]) -> dict[str, SummaryStats]:
    metrics = list(records[0].metrics)
    return {m: summarize([r.metrics[m] for r in records], _metric_sense(spec, m)) for m in metrics}


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """Run ``spec.runs`` independent runs; run ``r`` uses seed ``base_seed + r``."""
    dataset = resolve_dataset(spec) if spec.task is Task.CLUSTER else None
    if dataset is not None and spec.num_clusters > dataset.n_vectors:
        raise ExperimentError(f"{spec.num_clusters} clusters requested for {dataset.n_vectors} data vectors")
    indices = range(spec.runs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_once, [spec] * spec.runs, indices, [dataset] * spec.runs))
    else:
        records = [_run_once(spec, i, dataset) for i in indices]
    return ExperimentReport(spec, records, aggregate(spec, records))


def _target_label(spec: ExperimentSpec) -> str:
    if spec.task is Task.OPTIMIZE:
        return f"{spec.function} n={spec.dimension} ({spec.sense.value})"
    name = spec.dataset.split(":", 1)[-1] if spec.dataset.startswith("builtin:") else spec.dataset
    return f"{name} k={spec.num_clusters}"


def _table(report: ExperimentReport) -> str:
    spec = report.spec
    lines = [
        f"task: {spec.task.value}   target: {_target_label(spec)}   algorithm: {spec.algorithm}",
        f"runs: {spec.runs}   base seed: {spec.base_seed}   particles: {spec.swarm_size}",
        "",
        f"{'metric':<24} {'best':>14}   {'mean ± std':<30}",
    ]
    for metric, stats in report.aggregates.items():
        lines.append(f"{metric:<24} {stats.best:>14.6g}   {stats.mean:.6g} ± {stats.std:.6g}")
    return "\n".join(lines) + "\n"


def _csv(report: ExperimentReport) -> str:
    metrics = list(report.aggregates)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["row", "seed", *metrics, "evaluations", "iterations", "runtime_s",
                     *(f"{m}_{s}" for m in metrics for s in ("best", "std"))])
    for r in report.records:
        writer.writerow([r.run, r.seed, *(repr(r.metrics[m]) for m in metrics), r.evaluations, r.iterations,
                         f"{r.runtime_s:.6f}", *([""] * (2 * len(metrics)))])
    agg = report.aggregates
    writer.writerow(["mean", "", *(repr(agg[m].mean) for m in metrics), "", "", "",
                     *(repr(getattr(agg[m], s)) for m in metrics for s in ("best", "std"))])
    return out.getvalue()


def emit_report(report: ExperimentReport, fmt: str = "table") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        return _csv(report)
    if fmt == "table":
        return _table(report)
    raise ExperimentError(f"unknown report format {fmt!r}")


def format_comparison(reports: Sequence[ExperimentReport]) -> str:
    """One row per report in the Dataset / Algorithm / metric-mean,std layout."""
    metrics: list[str] = []
    for rep in reports:
        metrics += [m for m in rep.aggregates if m not in metrics]
    header = f"{'target':<22} {'algorithm':<16}" + "".join(f" {m + ', std':>34}" for m in metrics)
    rows = [header, "-" * len(header)]
    for rep in reports:
        cells = []
        for m in metrics:
            s = rep.aggregates.get(m)
            cells.append(f" {(f'{s.mean:.5g}, {s.std:.5g}' if s else '-'):>34}")
        rows.append(f"{_target_label(rep.spec):<22} {rep.spec.algorithm:<16}" + "".join(cells))
    return "\n".join(rows) + "\n"
