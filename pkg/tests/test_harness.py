import csv
import io
import json
import math

import pytest

from swarmcluster.harness import (
    ExperimentError,
    ExperimentReport,
    ExperimentSpec,
    emit_report,
    format_comparison,
    kmeans_iterations,
    pso_iterations,
    run_experiment,
)
from swarmcluster.numerics import summarize
from swarmcluster.objectives import ObjectiveSense


def cluster_spec(**kw):
    base = dict(task="cluster", algorithm="pso-gbest", dataset="builtin:iris", num_clusters=3, runs=4,
                evaluation_budget=200, base_seed=5)
    base.update(kw)
    return ExperimentSpec(**base)


def opt_spec(**kw):
    base = dict(task="optimize", algorithm="pso-lbest-ring", function="sphere", dimension=5, runs=3,
                iterations=50, base_seed=1)
    base.update(kw)
    return ExperimentSpec(**base)


def test_budget_accounting():
    assert pso_iterations(cluster_spec(evaluation_budget=1000)) == 100
    assert pso_iterations(cluster_spec(evaluation_budget=1005, swarm_size=20)) == 50
    assert kmeans_iterations(cluster_spec(evaluation_budget=1000)) == 1000
    assert kmeans_iterations(cluster_spec(evaluation_budget=5000)) == 1000
    assert pso_iterations(opt_spec(iterations=None, dimension=10)) == 3000
    assert pso_iterations(opt_spec(iterations=None, dimension=20)) == 4000
    assert pso_iterations(opt_spec(iterations=None, dimension=30)) == 5000


def test_spec_validation():
    with pytest.raises(ExperimentError):
        opt_spec(algorithm="kmeans")
    with pytest.raises(ExperimentError):
        opt_spec(algorithm="pso-hybrid")
    with pytest.raises(ExperimentError):
        cluster_spec(runs=0)
    with pytest.raises(ExperimentError):
        cluster_spec(evaluation_budget=5)
    with pytest.raises(ExperimentError):
        cluster_spec(algorithm="simulated-annealing")
    with pytest.raises(ExperimentError):
        cluster_spec(num_clusters=None)


def test_single_run_aggregates():
    rep = run_experiment(cluster_spec(runs=1))
    rec = rep.records[0]
    for metric, stats in rep.aggregates.items():
        assert stats.best == stats.mean == rec.metrics[metric]
        assert stats.std == 0.0


@pytest.mark.parametrize("algorithm", ["kmeans", "pso-gbest", "pso-lbest-ring", "pso-lbest-vn", "pso-hybrid"])
def test_deterministic_reports(algorithm):
    a = run_experiment(cluster_spec(algorithm=algorithm))
    b = run_experiment(cluster_spec(algorithm=algorithm))
    assert a.to_dict(include_timing=False) == b.to_dict(include_timing=False)


def test_seeds_and_prefix_stability():
    short = run_experiment(cluster_spec(runs=3))
    longer = run_experiment(cluster_spec(runs=4))
    assert [r.seed for r in longer.records] == [5, 6, 7, 8]
    strip = lambda rep: [{k: v for k, v in r.__dict__.items() if k != "runtime_s"} for r in rep.records]
    assert strip(longer)[:3] == strip(short)


def test_parallel_workers_match_serial():
    spec = cluster_spec(runs=3, algorithm="pso-lbest-vn")
    a, b = run_experiment(spec), run_experiment(spec, workers=2)
    assert a.to_dict(include_timing=False) == b.to_dict(include_timing=False)


def test_optimize_report():
    rep = run_experiment(opt_spec())
    assert list(rep.aggregates) == ["fitness"]
    assert rep.records[0].evaluations == 10 * 51
    assert rep.aggregates["fitness"].best == max(rep.values("fitness"))


def test_aggregate_senses():
    rep = run_experiment(cluster_spec())
    assert rep.aggregates["quantization_error"].best == min(rep.values("quantization_error"))
    assert rep.aggregates["inter_cluster_distance"].best == max(rep.values("inter_cluster_distance"))


def test_json_roundtrip():
    rep = run_experiment(cluster_spec(algorithm="pso-hybrid"))
    text = emit_report(rep, "json")
    back = ExperimentReport.from_dict(json.loads(text))
    assert back.to_dict() == rep.to_dict()
    assert list(json.loads(text)) == ["spec", "records", "aggregates"]
    assert emit_report(back, "json") == text


def test_csv_layout_and_recomputed_aggregates():
    rep = run_experiment(cluster_spec(runs=5))
    rows = list(csv.DictReader(io.StringIO(emit_report(rep, "csv"))))
    text_rows = emit_report(rep, "csv").strip().splitlines()
    assert len(text_rows) == 5 + 1 + 1
    runs, agg = rows[:-1], rows[-1]
    assert agg["row"] == "mean"
    for metric, sense in [("quantization_error", ObjectiveSense.MINIMIZE),
                          ("inter_cluster_distance", ObjectiveSense.MAXIMIZE)]:
        stats = summarize([float(r[metric]) for r in runs], sense)
        for got, want in [(float(agg[metric]), stats.mean), (float(agg[f"{metric}_std"]), stats.std),
                          (float(agg[f"{metric}_best"]), stats.best)]:
            assert math.isclose(got, want, rel_tol=1e-10, abs_tol=1e-300)


def test_table_format():
    rep = run_experiment(cluster_spec())
    lines = emit_report(rep, "table").splitlines()
    metric_lines = [l for l in lines if "±" in l and not l.startswith("metric")]
    assert len(metric_lines) == 2
    assert metric_lines[0].startswith("quantization_error")
    grid = format_comparison([rep, run_experiment(cluster_spec(algorithm="kmeans"))])
    assert "pso-gbest" in grid and "kmeans" in grid


def test_unknown_format():
    with pytest.raises(ExperimentError):
        emit_report(run_experiment(cluster_spec(runs=1)), "xml")


def test_missing_dataset_file(tmp_path):
    with pytest.raises(ValueError, match="missing.csv"):
        run_experiment(cluster_spec(dataset=str(tmp_path / "missing.csv")))


def test_normalize_and_file_dataset(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("0,0,a\n10,1,a\n0,2,b\n10,3,b\n")
    rep = run_experiment(cluster_spec(dataset=str(path), num_clusters=2, normalize=True, algorithm="kmeans"))
    assert rep.aggregates["quantization_error"].mean <= 1.0
    with pytest.raises(ExperimentError):
        run_experiment(cluster_spec(dataset=str(path), num_clusters=5))
