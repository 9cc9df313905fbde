"""Command-line interface: simulate, baseline-ic, generate, evaluate, curves.

Exit codes: 0 success, 1 user/input error, 2 internal invariant violation.
All file formats are described in README.md; all randomness flows from the
config's rng_seed (or --run-seed-base / --seed overrides), never from the
clock.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import engine, ic, io_formats, metrics
from .errors import StancecastError


def _trace_path(base, run_index: int, runs: int) -> Path:
    base = Path(base)
    if runs == 1:
        return base
    return base.with_name(f"{base.stem}.run{run_index:03d}{base.suffix}")


def _simulate_one(payload) -> list[tuple]:
    """Run one seeded simulation and write its trace (worker-safe)."""
    (graph_path, profiles_path, seeds_path, config_path,
     out_path, base_seed, run_index) = payload
    graph, symbols = io_formats.load_graph(graph_path, profiles_path)
    seeds = io_formats.load_seeds(seeds_path, symbols)
    params = io_formats.load_config(config_path)
    if base_seed is not None:
        params = params.with_seed(base_seed)
    trace = engine.run_tsa(graph, params, seeds, run_index=run_index)
    io_formats.write_trace(trace, out_path)
    last = [s for s in trace.round_summaries if s.round == params.rounds_K] \
        or [s for s in trace.round_summaries if s.round == 0]
    return [(symbols.topic_ids[s.topic], s.unknown, s.oppose, s.neutral,
             s.support) for s in last]


def _cmd_simulate(args) -> int:
    io_formats.load_config(args.config)  # validate before any output
    payloads = [
        (args.graph, args.profiles, args.seeds, args.config,
         _trace_path(args.out_trace, i, args.runs), args.run_seed_base, i)
        for i in range(args.runs)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_simulate_one, payloads))
    else:
        results = [_simulate_one(p) for p in payloads]
    for i, rows in enumerate(results):
        for topic, unknown, oppose, neutral, support in rows:
            print(f"run {i} topic {topic}: unknown={unknown} oppose={oppose} "
                  f"neutral={neutral} support={support}")
    return 0


def _cmd_baseline_ic(args) -> int:
    graph, symbols = io_formats.load_graph(args.graph, None)
    seed_nodes = io_formats.load_seed_nodes(args.seeds, symbols)
    params = ic.IcParams(edge_probability=args.p, rng_seed=args.seed).validate()
    mean, counts = ic.mean_final_active(graph, params, seed_nodes, args.runs)
    io_formats._atomic_write(
        args.out,
        json.dumps({"runs": counts, "mean": mean}, separators=(",", ":")) + "\n",
    )
    print(f"mean final active count over {args.runs} runs: {mean}")
    return 0


def _cmd_generate(args) -> int:
    try:
        mix = json.loads(args.stance_mix)
    except json.JSONDecodeError as exc:
        print(f"error: --stance-mix is not valid JSON: {exc}", file=sys.stderr)
        return 1
    bundle = io_formats.generate_synthetic(
        args.nodes, args.edges, args.topics, mix, args.seed, args.out_dir
    )
    params = io_formats.SimParams(rng_seed=args.seed)
    config_path = Path(args.out_dir) / "config.json"
    io_formats.write_config(config_path, params)
    for path in (bundle.edges_path, bundle.profiles_path, bundle.seeds_path,
                 config_path):
        print(f"wrote {path}")
    return 0


def _cmd_evaluate(args) -> int:
    initial, symbols = io_formats.load_profiles(args.initial)
    trace = io_formats.load_trace(args.trace)
    final = metrics.replay_trace(initial, trace)
    truth = io_formats.load_ground_truth(args.truth, symbols)
    report = metrics.accuracy_report(final, truth,
                                     topic_names=list(symbols.topic_ids))
    io_formats._atomic_write(args.out_report, json.dumps(report, indent=2) + "\n")
    for topic, scores in report.items():
        print(f"topic {topic}: activation_accuracy={scores['activation_accuracy']} "
              f"stance_accuracy={scores['stance_accuracy']}")
    return 0


def _cmd_curves(args) -> int:
    initial, symbols = io_formats.load_profiles(args.initial)
    trace = io_formats.load_trace(args.trace)
    points = metrics.stance_distribution_curve(trace, initial)
    metrics.write_curves_csv(args.out_csv, points,
                             topic_names=list(symbols.topic_ids))
    print(f"wrote {args.out_csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stancecast",
        description="Topic- and stance-aware cascade simulation over "
                    "directed social networks.",
        epilog="File formats (edge list, profile/seed/truth CSVs, config "
               "JSON, trace JSONL) are documented in README.md.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the stance-aware cascade")
    p.add_argument("--graph", required=True, help="edge list file (TSV)")
    p.add_argument("--profiles", required=True, help="initial profiles CSV")
    p.add_argument("--seeds", required=True, help="seed stance CSV")
    p.add_argument("--config", required=True, help="simulation params JSON")
    p.add_argument("--out-trace", required=True,
                   help="output trace path; run NNN gets suffix .runNNN")
    p.add_argument("--runs", type=int, default=1, help="number of runs")
    p.add_argument("--run-seed-base", type=int, default=None,
                   help="override the config rng_seed; run i uses stream i")
    p.add_argument("--workers", type=int, default=1,
                   help="processes for parallel runs (output matches serial)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("baseline-ic", help="run the vanilla IC baseline")
    p.add_argument("--graph", required=True, help="edge list file (TSV)")
    p.add_argument("--seeds", required=True,
                   help="seed CSV; only the node_id column is used")
    p.add_argument("--p", type=float, required=True,
                   help="uniform activation probability")
    p.add_argument("--runs", type=int, default=1000, help="Monte Carlo runs")
    p.add_argument("--out", required=True, help="output JSON path")
    p.add_argument("--seed", type=int, default=0, help="rng seed")
    p.set_defaults(func=_cmd_baseline_ic)

    p = sub.add_parser("generate", help="write a synthetic dataset bundle")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--topics", type=int, required=True)
    p.add_argument("--stance-mix", default="[0.9, 0.04, 0.03, 0.03]",
                   help="JSON distribution over (unknown, oppose, neutral, "
                        "support); one list or one per topic")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("evaluate", help="score a trace against ground truth")
    p.add_argument("--trace", required=True, help="trace JSONL path")
    p.add_argument("--initial", required=True, help="initial profiles CSV")
    p.add_argument("--truth", required=True, help="ground truth CSV")
    p.add_argument("--out-report", required=True, help="output report JSON")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("curves", help="emit per-round stance-count curves")
    p.add_argument("--trace", required=True, help="trace JSONL path")
    p.add_argument("--initial", required=True, help="initial profiles CSV")
    p.add_argument("--out-csv", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StancecastError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
