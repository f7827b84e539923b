"""Command line entry point: ``swarmcluster optimize`` and ``swarmcluster cluster``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .harness import ExperimentSpec, Task, emit_report, run_experiment

SEED_ENV = "SWARMCLUSTER_SEED"

CLUSTER_ALGOS = {
    "kmeans": "kmeans",
    "gbest": "pso-gbest",
    "ring": "pso-lbest-ring",
    "vonneumann": "pso-lbest-vn",
    "hybrid": "pso-hybrid",
}
TOPOLOGY_ALGOS = {"gbest": "pso-gbest", "ring": "pso-lbest-ring", "vonneumann": "pso-lbest-vn"}


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {SEED_ENV}={raw!r} is not an integer") from None


def _delimiter(text: str) -> Optional[str]:
    if text in ("whitespace", "ws", "space"):
        return None
    if text in ("tab", "\\t"):
        return "\t"
    if len(text) != 1:
        raise argparse.ArgumentTypeError("delimiter must be one character, 'tab' or 'whitespace'")
    return text


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--particles", type=int, default=10, help="swarm size (default 10)")
    p.add_argument("--runs", type=int, default=30, help="independent seeded runs (default 30)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"base seed; run r uses seed+r (default ${SEED_ENV} or 0)")
    p.add_argument("--out", choices=("table", "json", "csv"), default="table", help="report format")
    p.add_argument("--iters", type=int, default=None, help="PSO iterations (overrides the default budget)")
    p.add_argument("--w-start", type=float, default=0.9)
    p.add_argument("--w-end", type=float, default=0.4)
    p.add_argument("--c1", type=float, default=1.042)
    p.add_argument("--c2", type=float, default=1.042)
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmcluster", description="PSO benchmark optimization and clustering")
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="optimize a benchmark function")
    opt.add_argument("--function", required=True, choices=("sphere", "rosenbrock", "rastrigin"))
    opt.add_argument("--dim", type=int, required=True)
    opt.add_argument("--sense", choices=("min", "max"), default="max",
                     help="optimization sense (default max; the published benchmark table reports box maxima)")
    opt.add_argument("--topology", choices=tuple(TOPOLOGY_ALGOS), default="gbest")
    opt.add_argument("--no-confine", dest="confine", action="store_false",
                     help="let particles leave the search box (only velocity is clamped)")
    _add_common(opt)

    clu = sub.add_parser("cluster", help="cluster a dataset")
    src = clu.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", metavar="PATH", help="delimiter-separated data file")
    src.add_argument("--artificial", action="store_true", help="use the generated two-class problem")
    src.add_argument("--builtin", choices=("iris", "wine"), help="use a bundled dataset")
    clu.add_argument("--clusters", type=int, required=True)
    clu.add_argument("--algo", choices=tuple(CLUSTER_ALGOS), required=True)
    clu.add_argument("--budget", type=int, default=1000, help="function evaluations per run (default 1000)")
    clu.add_argument("--kmeans-iters", type=int, default=None, help="K-means iteration cap (also the hybrid seed)")
    clu.add_argument("--hybrid-topology", choices=tuple(TOPOLOGY_ALGOS), default="gbest")
    clu.add_argument("--normalize", action="store_true", help="min-max scale every feature to [0, 1]")
    clu.add_argument("--delimiter", type=_delimiter, default=",", help="field delimiter, 'tab' or 'whitespace'")
    clu.add_argument("--label-column", choices=("first", "last", "none"), default="last")
    clu.add_argument("--header", action="store_true", help="skip the first row")
    clu.add_argument("--drop-columns", type=_int_list, default=[], help="raw column indices to ignore, e.g. 0")
    clu.add_argument("--artificial-size", type=int, default=400)
    clu.add_argument("--artificial-seed", type=int, default=0)
    _add_common(clu)
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    seed = args.seed if args.seed is not None else _default_seed()
    common = dict(runs=args.runs, base_seed=seed, swarm_size=args.particles, iterations=args.iters,
                  w_start=args.w_start, w_end=args.w_end, c1=args.c1, c2=args.c2)
    if args.command == "optimize":
        return ExperimentSpec(task=Task.OPTIMIZE, algorithm=TOPOLOGY_ALGOS[args.topology], function=args.function,
                              dimension=args.dim, sense=args.sense, confine_to_box=args.confine, **common)
    if args.artificial:
        dataset, options = "artificial", {}
    elif args.builtin:
        dataset, options = f"builtin:{args.builtin}", {}
    else:
        dataset = args.data
        options = dict(delimiter=args.delimiter, has_header=args.header, drop_columns=list(args.drop_columns),
                       label_column=None if args.label_column == "none" else args.label_column)
    return ExperimentSpec(task=Task.CLUSTER, algorithm=CLUSTER_ALGOS[args.algo], dataset=dataset,
                          dataset_options=options, num_clusters=args.clusters, evaluation_budget=args.budget,
                          normalize=args.normalize, kmeans_iterations=args.kmeans_iters,
                          hybrid_topology=args.hybrid_topology, artificial_size=args.artificial_size,
                          artificial_seed=args.artificial_seed, sense="min", **common)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = spec_from_args(args)
        report = run_experiment(spec, workers=args.workers)
    except (ValueError, OSError) as exc:
        print(f"swarmcluster: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit_report(report, args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
