"""Command-line front end: ingest -> analysis -> filtering -> reports.

Every command is batch and deterministic: identical flags produce
byte-identical output files at any thread count.  Per-phase timings go to
stderr only, so they never perturb the written artifacts.

Outputs of ``run`` and ``robust``:
  <out>.features.txt   selected 1-based row indices, ascending, one per line
  <out>.report.json    full reproduction record (config echo included)
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import analysis, dataset, synth
from .dissect import Removal


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _config_echo(cfg: analysis.PfaConfig, args, extra=()) -> dict:
    echo = {
        "input": args.input,
        "n_outputs": args.n_outputs,
        "nu": cfg.nu,
        "alpha": cfg.alpha,
        "ns": cfg.ns,
        "batching": cfg.batching,
        "seed": cfg.seed,
        "tie_seed": cfg.tie_seed,
        "min_expected": cfg.min_expected,
        "dof_mode": cfg.dof_mode,
        "theta": cfg.theta,
        "threads": cfg.threads,
    }
    echo.update(extra)
    return echo


def _removals_json(removals: list[Removal]) -> list[dict]:
    return [
        {
            "step": r.step,
            "nodes": sorted(r.nodes),
            "from_component": sorted(r.from_component),
        }
        for r in removals
    ]


def _result_json(result: analysis.PfaResult) -> dict:
    payload = {
        "principal_subgraphs": [sorted(s) for s in result.principal_subgraphs],
        "removed": _removals_json(result.removed),
        "constants": sorted(result.constants),
        "relevant_features": (
            sorted(result.relevant_features)
            if result.relevant_features is not None
            else None
        ),
        "mi_scores": (
            {
                str(feature): {str(out): score for out, score in by_output.items()}
                for feature, by_output in sorted(result.mi_scores.items())
            }
            if result.mi_scores is not None
            else None
        ),
        "selected_features": sorted(result.selected_features()),
        "warnings": list(result.warnings),
    }
    return payload


def _graph_json(result: analysis.PfaResult) -> dict:
    nodes = sorted(
        i for i, d in result.discretized.items() if d.testable and i > result.n_outputs
    )
    node_set = set(nodes)
    edges = []
    tests = []
    for (i, j), verdict in sorted(result.cache.verdicts.items()):
        tests.append(
            {
                "pair": [i, j],
                "chi2": verdict.chi2,
                "dof": verdict.dof,
                "p_value": verdict.p_value,
                "independent": verdict.independent,
                "guard_ok": verdict.guard_ok,
            }
        )
        if not verdict.independent and i in node_set and j in node_set:
            edges.append([i, j])
    return {"nodes": nodes, "edges": edges, "tests": tests}


def _write_outputs(out_prefix: str, features, report: dict) -> None:
    with open(f"{out_prefix}.features.txt", "w", newline="\n") as fh:
        for index in sorted(features):
            fh.write(f"{index}\n")
    with open(f"{out_prefix}.report.json", "w", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")


def _build_config(args) -> analysis.PfaConfig:
    return analysis.PfaConfig(
        nu=args.nu,
        alpha=args.alpha,
        ns=args.ns,
        batching=args.batching,
        seed=args.seed,
        min_expected=args.min_expected,
        dof_mode=args.dof_mode,
        theta=args.theta,
        tie_seed=args.tie_seed,
        threads=args.threads,
    )


def _analyze(ds: dataset.Dataset, cfg: analysis.PfaConfig) -> analysis.PfaResult:
    started = time.perf_counter()
    result = analysis.run_pfa(ds, cfg)
    _log(f"pfa: analysis in {time.perf_counter() - started:.2f}s")
    if ds.n_outputs >= 1:
        started = time.perf_counter()
        result = analysis.filter_relevant(result, ds, cfg)
        if cfg.theta is not None:
            analysis.filter_by_mi(result, ds, cfg.theta)
        _log(f"pfa: relevance filtering in {time.perf_counter() - started:.2f}s")
    elif cfg.theta is not None:
        raise ValueError("--theta needs at least one output row (--n-outputs >= 1)")
    return result


def cmd_run(args) -> int:
    cfg = _build_config(args)
    ds = dataset.load_csv(args.input, args.n_outputs)
    result = _analyze(ds, cfg)
    report = {
        "config": _config_echo(cfg, args),
        **_result_json(result),
        "graph": _graph_json(result),
    }
    _write_outputs(args.out, result.selected_features(), report)
    for warning in result.warnings:
        _log(f"pfa: warning: {warning}")
    return 0


def cmd_robust(args) -> int:
    if not 0.0 < args.fraction <= 1.0:
        raise ValueError(f"--fraction must be in (0, 1], got {args.fraction}")
    cfg = _build_config(args)
    ds = dataset.load_csv(args.input, args.n_outputs)
    started = time.perf_counter()
    common, results = analysis.robust_intersection(ds, cfg, args.runs, args.fraction)
    _log(f"pfa: {args.runs} runs in {time.perf_counter() - started:.2f}s")
    report = {
        "config": _config_echo(
            cfg, args, extra={"runs": args.runs, "fraction": args.fraction}
        ),
        "intersection": sorted(common),
        "runs": [_result_json(result) for result in results],
    }
    _write_outputs(args.out, common, report)
    return 0


def cmd_synth(args) -> int:
    spec = synth.SynthSpec(scenario=args.scenario, n_points=args.n, seed=args.seed)
    ds = synth.generate(spec)
    dataset.save_csv(ds, args.out)
    _log(f"pfa: wrote {ds.n_rows}x{ds.n_points} dataset to {args.out}")
    return 0


def _add_common_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input CSV (rows=variables)")
    parser.add_argument(
        "--n-outputs", type=int, default=1, dest="n_outputs",
        help="leading rows that are output variables (default 1)",
    )
    parser.add_argument(
        "--nu", type=int, required=True,
        help="minimum points per bin; dataset-dependent, no default",
    )
    parser.add_argument("--ns", type=int, default=50, help="max nodes per subgraph")
    parser.add_argument("--alpha", type=float, default=0.01, help="significance level")
    parser.add_argument("--theta", type=float, default=None, help="MI threshold")
    parser.add_argument(
        "--batching", choices=analysis.BATCHING_MODES, default="ordered"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tie-seed", type=int, default=None, dest="tie_seed")
    parser.add_argument("--min-expected", type=float, default=5.0, dest="min_expected")
    parser.add_argument(
        "--dof-mode", choices=("independence", "cells_minus_one"),
        default="independence", dest="dof_mode",
    )
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", required=True, help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfa", description="Principal feature analysis over tabular data"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single analysis over one dataset")
    _add_common_run_flags(run)
    run.set_defaults(func=cmd_run)

    robust = sub.add_parser("robust", help="intersect runs over random subsamples")
    _add_common_run_flags(robust)
    robust.add_argument("--runs", type=int, default=5)
    robust.add_argument("--fraction", type=float, default=0.95)
    robust.set_defaults(func=cmd_robust)

    gen = sub.add_parser("synth", help="write a synthetic scenario dataset")
    gen.add_argument("--scenario", required=True, choices=synth.SCENARIOS[:4])
    gen.add_argument("--n", type=int, default=5000, help="number of data points")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, dataset.DatasetError, RuntimeError) as exc:
        _log(f"pfa: error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
