"""Command-line experiment runner: run | compare | sweep | baseline."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path

from .harness import (
    ConfigError,
    ExperimentConfig,
    compare_table,
    config_hash,
    run_seeds,
    sweep_table,
    write_csv,
    write_run_record,
)

EXIT_CONFIG = 2


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config: no file at {path}")
    doc = json.loads(p.read_text())
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"config: unknown fields {sorted(unknown)}")
    if "seeds" in doc:
        doc["seeds"] = tuple(doc["seeds"])
    return doc


def _build_config(args) -> ExperimentConfig:
    doc = _load_config_file(args.config) if args.config else {}
    exp = ExperimentConfig(**doc)
    overrides = {}
    for name in (
        "case", "m", "variant", "beta", "delta_theta", "n_max", "quad_nodes",
        "broadcast_cap", "noise_std", "output_dir",
    ):
        val = getattr(args, name, None)
        if val is not None:
            overrides[name] = val
    if getattr(args, "seeds", None):
        overrides["seeds"] = tuple(int(s) for s in args.seeds.split(","))
    if getattr(args, "no_penalty", False):
        overrides["penalty_enabled"] = False
    if getattr(args, "arc_length", False):
        overrides["arc_length_weight"] = True
    if getattr(args, "per_robot_rmse", False):
        overrides["per_robot_rmse"] = True
    exp = replace(exp, **overrides)
    exp.validate()
    if exp.case not in ("case1", "case2") and not Path(exp.case).exists():
        raise ConfigError(f"case: no preset or field file at {exp.case}")
    return exp


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON experiment config file")
    p.add_argument("--case", help="case1 | case2 | path to a field file")
    p.add_argument("--m", type=int, help="swarm size")
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--beta", type=float)
    p.add_argument("--delta-theta", type=float, dest="delta_theta")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--quad-nodes", type=int, dest="quad_nodes")
    p.add_argument("--broadcast-cap", type=int, dest="broadcast_cap")
    p.add_argument("--noise-std", type=float, dest="noise_std")
    p.add_argument("--no-penalty", action="store_true")
    p.add_argument("--arc-length", action="store_true")
    p.add_argument("--per-robot-rmse", action="store_true")
    p.add_argument("--output", dest="output_dir")
    p.add_argument("--workers", type=int, default=None,
                   help="seed-level parallelism (default: SWARMSEARCH_WORKERS or 1)")


def cmd_run(args) -> int:
    exp = _build_config(args)
    out = Path(exp.output_dir) / config_hash(exp)
    summaries = run_seeds(exp, workers=args.workers, save_to=out)
    record = write_run_record(exp, summaries, out)
    for s in sorted(summaries):
        r = summaries[s]
        print(f"seed {s}: {r.termination} t={r.t_achieved:.3f}s tau={r.tau:.4f} "
              f"rmse={r.rmse:.4f}")
    print(f"run record: {record}")
    return 0


def cmd_compare(args) -> int:
    exp = _build_config(args)
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    rows = compare_table(exp, variants, workers=args.workers)
    out = Path(exp.output_dir) / f"compare_{config_hash(exp)}.csv"
    write_csv(out, rows)
    for row in rows:
        print(f"{row['case']:>6} {row['variant']:>12} tau={row['median_tau']:.4f} "
              f"rmse={row['median_rmse']:.4f} found={row['n_found']}/{row['n_seeds']}")
    print(f"table: {out}")
    return 0


def cmd_sweep(args) -> int:
    exp = _build_config(args)
    m_list = [int(v) for v in args.m_list.split(",")]
    rows = sweep_table(exp, m_list, workers=args.workers)
    out = Path(exp.output_dir) / f"sweep_{config_hash(exp)}.csv"
    write_csv(out, rows)
    for row in rows:
        print(f"m={row['m']:>3} tau={row['median_tau']:.4f} rmse={row['median_rmse']:.4f} "
              f"plan_time={row['mean_plan_time'] * 1e3:.1f}ms")
    print(f"table: {out}")
    return 0


def cmd_baseline(args) -> int:
    exp = replace(_build_config(args), variant="exhaustive", seeds=(0,))
    out = Path(exp.output_dir) / config_hash(exp)
    summaries = run_seeds(exp, workers=1, save_to=out)
    write_run_record(exp, summaries, out)
    r = summaries[0]
    print(f"exhaustive: {r.termination} t={r.t_achieved:.3f}s tau={r.tau:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swarmsearch",
                                 description="swarm source-search experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one configuration across its seeds")
    _add_common(p)
    p.add_argument("--variant", choices=["full", "sync", "explorative", "exhaustive"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="median metrics per variant")
    _add_common(p)
    p.add_argument("--variants", required=True,
                   help="comma list, e.g. full,sync,explorative,exhaustive")
    p.set_defaults(func=cmd_compare, variant=None)

    p = sub.add_parser("sweep", help="scalability sweep over swarm sizes")
    _add_common(p)
    p.add_argument("--m-list", required=True, dest="m_list",
                   help="ascending comma list, e.g. 2,5,10,20")
    p.add_argument("--variant", choices=["full", "sync", "explorative"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="exhaustive-search baseline")
    _add_common(p)
    p.set_defaults(func=cmd_baseline, variant=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
