"""Config-driven experiment runner: single runs, variant comparisons,
scalability sweeps, and deterministic run-record artifacts."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field, replace
from pathlib import Path

import numpy as np

from .acquisition import AcquisitionConfig
from .field import PRESETS, GaussianMixtureField, load_field_file
from .planner import PlannerConfig
from .swarm import SimResult, SwarmConfig, run_experiment, run_exhaustive_baseline

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunSummary",
    "SCHEMA_VERSION",
    "config_hash",
    "resolve_case",
    "execute_run",
    "run_seeds",
    "write_run_record",
    "compare_table",
    "sweep_table",
]

SCHEMA_VERSION = 1
WORKERS_ENV = "SWARMSEARCH_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    case: str = "case1"            # preset name or path to a field file
    m: int = 5
    variant: str = "full"          # full | sync | explorative | exhaustive
    penalty_enabled: bool = True
    seeds: tuple = (0,)
    beta: float = 50.0
    delta_theta: float | None = None   # None: use the case preset's value
    n_max: int = 1000
    quad_nodes: int = 11
    broadcast_cap: int = 100
    noise_std: float | None = None
    arc_length_weight: bool = False
    baseline_uncapped: bool = True  # let the exhaustive sweep run to completion
    snapshot_grid: int = 50
    final_snapshot: bool = True
    per_robot_rmse: bool = False
    output_dir: str = "runs"

    def validate(self):
        if self.m < 1:
            raise ConfigError("m: must be >= 1")
        if not self.seeds:
            raise ConfigError("seeds: must be non-empty")
        if self.variant not in ("full", "sync", "explorative", "exhaustive"):
            raise ConfigError(f"variant: unknown value {self.variant!r}")
        if self.beta <= 0:
            raise ConfigError("beta: must be > 0")
        if self.n_max < 1:
            raise ConfigError("n_max: must be >= 1")
        if self.quad_nodes < 2:
            raise ConfigError("quad_nodes: must be >= 2")
        if self.broadcast_cap < 1:
            raise ConfigError("broadcast_cap: must be >= 1")
        if self.noise_std is not None and self.noise_std < 0:
            raise ConfigError("noise_std: must be >= 0")
        if self.delta_theta is not None and not 0 < self.delta_theta <= 360:
            raise ConfigError("delta_theta: must lie in (0, 360]")


def resolve_case(case: str):
    """Map a case name or field-file path to (field, case config)."""
    if case in PRESETS:
        return PRESETS[case]()
    path = Path(case)
    if not path.exists():
        raise ConfigError(f"case: no preset or field file at {case}")
    fld, cfg = load_field_file(path)
    if cfg is None:
        raise ConfigError(f"case: field file {case} lacks a 'mission' block")
    return fld, cfg


def _behavior_dict(exp: ExperimentConfig) -> dict:
    doc = asdict(exp)
    doc.pop("output_dir")
    doc["seeds"] = sorted(int(s) for s in exp.seeds)
    return doc


def config_hash(exp: ExperimentConfig) -> str:
    """Hash over every behavior-affecting field (output location excluded)."""
    blob = json.dumps(_behavior_dict(exp), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class RunSummary:
    seed: int
    termination: str
    t_achieved: float
    tau: float
    rmse: float
    found_by: int | None
    n_plans: int
    mean_plan_time: float
    final_hyper: dict | None = None
    per_robot_rmse: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "termination": self.termination,
            "t_achieved": self.t_achieved,
            "tau": self.tau,
            "rmse": None if math.isnan(self.rmse) else self.rmse,
            "found_by": self.found_by,
            "n_plans": self.n_plans,
            "final_hyper": self.final_hyper,
            "per_robot_rmse": {str(k): v for k, v in self.per_robot_rmse.items()},
        }


def summarize(result: SimResult, seed: int) -> RunSummary:
    hyper = result.final_hyper
    return RunSummary(
        seed=seed,
        termination=result.termination,
        t_achieved=result.t_achieved,
        tau=result.tau,
        rmse=result.mapping_rmse,
        found_by=result.found_by,
        n_plans=len(result.plan_times),
        mean_plan_time=float(np.mean(result.plan_times)) if result.plan_times else 0.0,
        final_hyper=None if hyper is None else {
            "length_scale": hyper.length_scale,
            "signal_std": hyper.signal_std,
            "noise_std": hyper.noise_std,
        },
        per_robot_rmse=dict(result.per_robot_rmse),
    )


def execute_run(exp: ExperimentConfig, seed: int) -> SimResult:
    """Run one seed of an experiment config through the simulator."""
    exp.validate()
    fld, case = resolve_case(exp.case)
    if exp.noise_std is not None:
        fld = GaussianMixtureField(fld.components, fld.arena, exp.noise_std)
    if exp.variant == "exhaustive":
        cap = math.inf if exp.baseline_uncapped else None
        return run_exhaustive_baseline(fld, case, exp.m, t_max=cap)
    pcfg = PlannerConfig(
        speed=case.speed,
        horizon=case.horizon,
        n_max=exp.n_max,
        delta_theta=exp.delta_theta if exp.delta_theta is not None else case.delta_theta,
        variant=exp.variant,
    )
    acq = AcquisitionConfig(
        beta=exp.beta,
        quad_nodes=exp.quad_nodes,
        arc_length_weight=exp.arc_length_weight,
    )
    scfg = SwarmConfig(
        m=exp.m,
        seed=seed,
        variant=exp.variant,
        penalty_enabled=exp.penalty_enabled,
        broadcast_cap=exp.broadcast_cap,
        snapshot_grid=exp.snapshot_grid,
        final_snapshot=exp.final_snapshot,
        per_robot_rmse=exp.per_robot_rmse,
    )
    return run_experiment(fld, case, scfg, planner_cfg=pcfg, acq_cfg=acq)


def _worker(args):
    exp_doc, seed = args
    exp = ExperimentConfig(**exp_doc)
    result = execute_run(exp, seed)
    return seed, summarize(result, seed)


def run_seeds(exp: ExperimentConfig, workers: int | None = None, save_to=None):
    """Run all seeds of a config; returns {seed: RunSummary}.

    Runs in-process when `workers` <= 1 (the default unless the
    SWARMSEARCH_WORKERS environment variable says otherwise). With `save_to`
    set, per-seed artifacts (event log, trajectories, snapshots) are written
    as they complete; artifact writing is only available in-process.
    """
    exp.validate()
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    seeds = list(exp.seeds)
    out = {}
    if workers <= 1 or len(seeds) == 1 or save_to is not None:
        for seed in seeds:
            result = execute_run(exp, seed)
            out[seed] = summarize(result, seed)
            if save_to is not None:
                _write_seed_artifacts(Path(save_to), result, seed)
        return out
    os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
    os.environ.setdefault("OMP_NUM_THREADS", "1")
    exp_doc = asdict(exp)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for seed, summary in pool.map(_worker, [(exp_doc, s) for s in seeds]):
            out[seed] = summary
    return out


def _write_seed_artifacts(root: Path, result: SimResult, seed: int):
    d = root / f"seed{seed:04d}"
    d.mkdir(parents=True, exist_ok=True)
    (d / "events.jsonl").write_text(result.event_log_text())
    with open(d / "trajectories.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "robot", "x", "y", "value"])
        for row in result.trajectories:
            w.writerow([repr(row[0]), row[1], repr(row[2]), repr(row[3]), repr(row[4])])
    for t_s, snap in result.snapshots.items():
        tag = f"{t_s:.3f}".replace(".", "_")
        np.savetxt(d / f"snapshot_mean_t{tag}.csv", snap["mean"], delimiter=",")
        np.savetxt(d / f"snapshot_std_t{tag}.csv", snap["std"], delimiter=",")


def write_run_record(exp: ExperimentConfig, summaries: dict, out_dir) -> Path:
    """Write the deterministic run record plus a separate timing metadata file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = {
        "schema_version": SCHEMA_VERSION,
        "config": _behavior_dict(exp),
        "config_hash": config_hash(exp),
        "results": [summaries[s].to_dict() for s in sorted(summaries)],
    }
    path = out / "run_record.json"
    path.write_text(json.dumps(record, sort_keys=True, indent=2) + "\n")
    meta = {
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "mean_plan_time": {
            str(s): summaries[s].mean_plan_time for s in sorted(summaries)
        },
    }
    (out / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return path


def _median(values):
    return statistics.median(values) if values else float("nan")


def compare_table(
    base: ExperimentConfig, variants, workers: int | None = None
) -> list[dict]:
    """Median tau and mapping error per variant on one case, one row each."""
    if len(variants) < 2:
        raise ConfigError("variants: need at least two to compare")
    rows = []
    for variant in variants:
        exp = replace(base, variant=variant)
        if variant == "exhaustive":
            exp = replace(exp, seeds=(0,))  # deterministic, one run suffices
        res = run_seeds(exp, workers=workers)
        taus = [r.tau for r in res.values()]
        rmses = [r.rmse for r in res.values() if not math.isnan(r.rmse)]
        rows.append(
            {
                "case": base.case,
                "variant": variant,
                "median_tau": _median(taus),
                "median_rmse": _median(rmses) if rmses else float("nan"),
                "n_seeds": len(res),
                "n_found": sum(1 for r in res.values() if r.termination == "source_found"),
            }
        )
    return rows


def sweep_table(
    base: ExperimentConfig, m_list, workers: int | None = None
) -> list[dict]:
    """Median tau/rmse and mean per-plan compute time across swarm sizes."""
    if not m_list:
        raise ConfigError("m_list: must be non-empty")
    if list(m_list) != sorted(m_list):
        raise ConfigError("m_list: must be ascending")
    rows = []
    for m in m_list:
        exp = replace(base, m=int(m))
        res = run_seeds(exp, workers=workers)
        rows.append(
            {
                "case": base.case,
                "m": int(m),
                "median_tau": _median([r.tau for r in res.values()]),
                "median_rmse": _median([r.rmse for r in res.values()]),
                "mean_plan_time": float(
                    np.mean([r.mean_plan_time for r in res.values()])
                ),
                "n_seeds": len(res),
                "n_found": sum(1 for r in res.values() if r.termination == "source_found"),
            }
        )
    return rows


def write_csv(path, rows: list[dict]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        w.writeheader()
        for row in rows:
            w.writerow(row)
