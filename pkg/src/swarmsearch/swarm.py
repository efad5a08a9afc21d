"""Deterministic discrete-event engine for the asynchronous search loop.

Each robot travels straight legs at constant speed, samples the field on a
1 Hz clock, and on reaching a waypoint: consumes pending peer broadcasts,
refits its signal model, picks the next waypoint by maximizing the
acquisition objective, broadcasts its plan plus last-leg observations, and
departs. The mission ends when any robot comes within the detection radius
of the source, or at the time budget. All event times are quantized to 1 ms
and processed in (time, event-rank, robot-id) order, so replays are
bit-identical.
"""

from __future__ import annotations

import heapq
import math
import time as _time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .acquisition import AcquisitionConfig, PeerPlan
from .field import Arena, CaseConfig, GaussianMixtureField, evaluate, observe
from .gp import Dataset, GpFitConfig, GpHyperParams, fit
from .metrics import mapping_rmse, relative_completion_time
from .planner import PlannerConfig, WaypointPlanner, downsample, first_waypoint

__all__ = [
    "SwarmConfig",
    "Broadcast",
    "Knowledge",
    "RobotState",
    "SimResult",
    "deliver_and_snapshot",
    "run_experiment",
    "run_exhaustive_baseline",
]

_RANK_SAMPLE = 0  # samples precede arrivals at equal times so a sample taken
_RANK_ARRIVE = 1  # exactly at arrival is part of the broadcast leg data


@dataclass(frozen=True)
class SwarmConfig:
    m: int
    seed: int = 0
    variant: str = "full"
    penalty_enabled: bool = True
    broadcast_cap: int = 100       # per-leg observation records shared
    planning_latency: float = 0.0  # simulated seconds spent planning
    sample_period: float = 1.0     # seconds between field measurements
    snapshot_times: tuple = ()
    snapshot_grid: int = 50
    final_snapshot: bool = True
    per_robot_rmse: bool = False
    refit: str = "always"          # 'freeze' pins hyperparameters after the first fit

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one robot")
        if self.sample_period <= 0:
            raise ValueError("sample_period must be positive")
        if self.broadcast_cap < 1:
            raise ValueError("broadcast_cap must be >= 1")
        if self.planning_latency < 0:
            raise ValueError("planning_latency must be >= 0")


@dataclass(frozen=True)
class Broadcast:
    """What a robot announces after planning: its new target, the sample
    locations it will visit en route, and its observations since the last
    plan (possibly thinned)."""

    sender: int
    t_sent: float
    planned_waypoint: np.ndarray
    planned_path_samples: np.ndarray
    observations: Dataset


@dataclass(frozen=True)
class Knowledge:
    """A robot's view of the world: merged observations + peers' latest plans."""

    data: Dataset
    plans: dict  # peer id -> Broadcast (latest by t_sent)


def deliver_and_snapshot(knowledge: Knowledge, inbox) -> Knowledge:
    """Merge pending broadcasts into the knowledge snapshot.

    Observation records deduplicate by (observer, time); each peer's latest
    planned waypoint replaces older entries. Returns a new snapshot.
    """
    if not inbox:
        return knowledge
    data = knowledge.data.merge(*[bc.observations for bc in inbox])
    plans = dict(knowledge.plans)
    for bc in inbox:
        cur = plans.get(bc.sender)
        if cur is None or bc.t_sent >= cur.t_sent:
            plans[bc.sender] = bc
    return Knowledge(data, plans)


@dataclass
class RobotState:
    id: int
    pose: np.ndarray
    k: int = 0
    current_target: np.ndarray | None = None
    leg_origin: np.ndarray | None = None
    depart_ms: int = 0
    arrive_ms: int = 0
    knowledge: Knowledge = dc_field(default_factory=lambda: Knowledge(Dataset.empty(), {}))
    inbox: list = dc_field(default_factory=list)
    next_sample_ms: int = 0
    prev_hyper: GpHyperParams | None = None
    prev_x_star: np.ndarray | None = None
    holding: bool = False
    # per-leg observation buffer, flushed at each planning instance
    leg_t: list = dc_field(default_factory=list)
    leg_loc: list = dc_field(default_factory=list)
    leg_v: list = dc_field(default_factory=list)

    def position_at(self, ms: int) -> np.ndarray:
        if self.current_target is None or ms <= self.depart_ms:
            return (self.leg_origin if self.leg_origin is not None else self.pose).copy()
        if ms >= self.arrive_ms:
            return self.current_target.copy()
        frac = (ms - self.depart_ms) / (self.arrive_ms - self.depart_ms)
        return self.leg_origin + frac * (self.current_target - self.leg_origin)

    def flush_leg(self) -> Dataset:
        if not self.leg_t:
            return Dataset.empty()
        ds = Dataset(
            self.leg_t,
            np.full(len(self.leg_t), self.id),
            np.asarray(self.leg_loc).reshape(-1, 2),
            self.leg_v,
        )
        self.leg_t, self.leg_loc, self.leg_v = [], [], []
        return ds


@dataclass
class SimResult:
    termination: str
    t_achieved: float
    tau: float
    mapping_rmse: float
    found_by: int | None
    per_robot_rmse: dict
    trajectories: list            # rows (t, robot, x, y, value-or-nan)
    event_log: list               # dicts, deterministic
    snapshots: dict               # t -> {"xs", "ys", "mean", "std"}
    final_hyper: GpHyperParams | None
    plan_times: list
    case_name: str = ""
    m: int = 0
    variant: str = ""
    seed: int = 0

    def event_log_text(self) -> str:
        import json

        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.event_log)


def _ceil_ms(seconds: float) -> int:
    return max(int(math.ceil(seconds * 1000.0 - 1e-9)), 0)


def _fmt_pt(p) -> list:
    return [float(p[0]), float(p[1])]


class _Engine:
    def __init__(self, fld, case, swarm_cfg, planner_cfg, acq_cfg, fit_cfg):
        self.fld = fld
        self.case = case
        self.cfg = swarm_cfg
        self.arena = fld.arena
        start = np.asarray(case.start, dtype=float)
        if not self.arena.contains(start):
            raise ValueError("swarm start lies outside the arena")
        if case.t_max <= 0:
            raise ValueError("t_max must be positive")
        self.start = start
        self.source = fld.source
        self.pcfg = planner_cfg or PlannerConfig(
            speed=case.speed,
            horizon=case.horizon,
            delta_theta=case.delta_theta,
            variant=swarm_cfg.variant,
        )
        self.acq_cfg = acq_cfg or AcquisitionConfig()
        self.planner = WaypointPlanner(
            self.pcfg,
            self.acq_cfg,
            self.arena,
            case.signal_max,
            case.lipschitz,
            case.t_max,
            penalty_enabled=swarm_cfg.penalty_enabled,
            fit_cfg=fit_cfg,
            refit=swarm_cfg.refit,
        )
        self.robots = [
            RobotState(id=i + 1, pose=start.copy(), leg_origin=start.copy())
            for i in range(swarm_cfg.m)
        ]
        self.obs_rng = [
            np.random.default_rng(np.random.SeedSequence((swarm_cfg.seed, 101, r.id)))
            for r in self.robots
        ]
        self.period_ms = _ceil_ms(swarm_cfg.sample_period)
        self.t_max_ms = _ceil_ms(case.t_max)
        self.latency_ms = _ceil_ms(swarm_cfg.planning_latency)
        self.events = []
        self.log = []
        self.traj = []
        self.plan_times = []
        # union of every observation ever taken, for final metrics/snapshots
        self.all_t, self.all_o, self.all_loc, self.all_v = [], [], [], []
        self.found = None  # (t_ms, robot id, distance)
        self.pending_snaps = sorted(float(t) for t in swarm_cfg.snapshot_times)
        self.snapshots = {}

    # -- helpers ---------------------------------------------------------

    def _push(self, ms, rank, rid):
        heapq.heappush(self.events, (ms, rank, rid))

    def _check_vicinity(self, robot, pose, t_ms) -> bool:
        dist = float(np.linalg.norm(pose - self.source))
        if dist <= self.case.detection_radius + 1e-12:
            self.found = (t_ms, robot.id, dist)
            self.log.append(
                {"event": "found", "t": t_ms / 1000.0, "robot": robot.id, "dist": dist}
            )
            return True
        return False

    def _planned_path_samples(self, robot, depart_ms, arrive_ms) -> np.ndarray:
        first = robot.next_sample_ms
        if first > arrive_ms:
            return np.zeros((0, 2))
        ticks = np.arange(first, arrive_ms + 1, self.period_ms, dtype=np.int64)
        origin, target = robot.leg_origin, robot.current_target
        out = np.empty((len(ticks), 2))
        for i, ms in enumerate(ticks):
            if ms <= depart_ms or arrive_ms == depart_ms:
                out[i] = origin
            else:
                frac = min((ms - depart_ms) / (arrive_ms - depart_ms), 1.0)
                out[i] = origin + frac * (target - origin)
        return out

    def _broadcast(self, robot, t_ms, leg_obs: Dataset, path_samples):
        if len(leg_obs) > self.cfg.broadcast_cap:
            leg_obs = downsample(leg_obs, self.cfg.broadcast_cap)
        bc = Broadcast(
            sender=robot.id,
            t_sent=t_ms / 1000.0,
            planned_waypoint=robot.current_target.copy(),
            planned_path_samples=np.asarray(path_samples),
            observations=leg_obs,
        )
        t_obs_max = float(np.max(leg_obs.times)) if len(leg_obs) else None
        self.log.append(
            {
                "event": "broadcast",
                "t": t_ms / 1000.0,
                "robot": robot.id,
                "k": robot.k,
                "n_obs": len(leg_obs),
                "t_obs_max": t_obs_max,
            }
        )
        for peer in self.robots:
            if peer.id != robot.id:
                peer.inbox.append(bc)

    def _depart(self, robot, t_ms, waypoint, hold: bool):
        robot.leg_origin = robot.pose.copy()
        robot.depart_ms = t_ms + self.latency_ms
        if hold:
            robot.current_target = robot.pose.copy()
            robot.arrive_ms = robot.depart_ms + self.period_ms
        else:
            robot.current_target = waypoint.copy()
            dist = float(np.linalg.norm(waypoint - robot.pose))
            robot.arrive_ms = robot.depart_ms + max(_ceil_ms(dist / self.pcfg.speed), 1)
        self._push(robot.arrive_ms, _RANK_ARRIVE, robot.id)

    def _first_decisions(self):
        for robot in self.robots:
            offset = first_waypoint(robot.id, self.cfg.m, self.pcfg)
            target = self.arena.clip(self.start + offset)
            robot.k = 1
            robot.next_sample_ms = self.period_ms
            self._depart(robot, 0, target, hold=False)
            path = self._planned_path_samples(robot, robot.depart_ms, robot.arrive_ms)
            self.log.append(
                {
                    "event": "plan",
                    "t": 0.0,
                    "robot": robot.id,
                    "k": robot.k,
                    "waypoint": _fmt_pt(target),
                    "alpha": None,
                    "acq": None,
                    "fallback": False,
                    "hold": False,
                    "sync_clipped": False,
                    "n_data": 0,
                    "x_star": None,
                }
            )
            self._broadcast(robot, 0, Dataset.empty(), path)
            self._push(robot.next_sample_ms, _RANK_SAMPLE, robot.id)

    def _record_observation(self, robot, t_ms, pose, value):
        t_s = t_ms / 1000.0
        robot.leg_t.append(t_s)
        robot.leg_loc.append(pose.copy())
        robot.leg_v.append(value)
        self.all_t.append(t_s)
        self.all_o.append(robot.id)
        self.all_loc.append(pose.copy())
        self.all_v.append(value)
        self.traj.append((t_s, robot.id, float(pose[0]), float(pose[1]), float(value)))

    def _on_sample(self, robot, t_ms):
        pose = robot.position_at(t_ms)
        robot.pose = pose
        value = float(observe(self.fld, pose, self.obs_rng[robot.id - 1]))
        self._record_observation(robot, t_ms, pose, value)
        if self._check_vicinity(robot, pose, t_ms):
            return
        robot.next_sample_ms = t_ms + self.period_ms
        self._push(robot.next_sample_ms, _RANK_SAMPLE, robot.id)

    def _on_arrive(self, robot, t_ms):
        robot.pose = robot.current_target.copy()
        t_s = t_ms / 1000.0
        self.traj.append(
            (t_s, robot.id, float(robot.pose[0]), float(robot.pose[1]), float("nan"))
        )
        self.log.append(
            {
                "event": "arrive",
                "t": t_s,
                "robot": robot.id,
                "k": robot.k,
                "pos": _fmt_pt(robot.pose),
            }
        )
        if self._check_vicinity(robot, robot.pose, t_ms):
            return

        own = robot.flush_leg()
        if len(own):
            robot.knowledge = Knowledge(robot.knowledge.data.merge(own), robot.knowledge.plans)
        for bc in robot.inbox:
            self.log.append(
                {
                    "event": "deliver",
                    "t": t_s,
                    "robot": robot.id,
                    "from": bc.sender,
                    "sent_t": bc.t_sent,
                    "n_obs": len(bc.observations),
                    "t_obs_max": float(np.max(bc.observations.times))
                    if len(bc.observations)
                    else None,
                }
            )
        robot.knowledge = deliver_and_snapshot(robot.knowledge, robot.inbox)
        robot.inbox = []

        peers = [
            PeerPlan(bc.planned_waypoint, bc.planned_path_samples)
            for pid, bc in sorted(robot.knowledge.plans.items())
            if pid != robot.id
        ]
        t0 = _time.perf_counter()
        result = self.planner.plan(
            robot.pose,
            robot.knowledge.data,
            peers,
            t_now=min(t_s, self.case.t_max),
            seed_key=(self.cfg.seed, 202, robot.id, robot.k),
            prev_hyper=robot.prev_hyper,
            prev_x_star=robot.prev_x_star,
            reuse_fit=robot.holding,  # parked robots replan cheaply each period
        )
        self.plan_times.append(_time.perf_counter() - t0)
        robot.prev_hyper = result.hyper
        if result.x_star is not None:
            robot.prev_x_star = result.x_star
        robot.k += 1

        step = float(np.linalg.norm(result.waypoint - robot.pose))
        hold = step < self.pcfg.speed * 1.5e-3  # sub-quantum leg: hold one period
        robot.holding = hold
        self._depart(robot, t_ms, result.waypoint, hold=hold)
        path = self._planned_path_samples(robot, robot.depart_ms, robot.arrive_ms)
        self.log.append(
            {
                "event": "plan",
                "t": t_s,
                "robot": robot.id,
                "k": robot.k,
                "waypoint": _fmt_pt(robot.current_target),
                "alpha": result.alpha,
                "acq": result.acq_value,
                "fallback": result.fallback,
                "hold": hold,
                "sync_clipped": result.sync_clipped,
                "n_data": len(robot.knowledge.data),
                "x_star": _fmt_pt(result.x_star) if result.x_star is not None else None,
            }
        )
        self._broadcast(robot, t_ms, own, path)

    def _union_dataset(self, up_to: float | None = None) -> Dataset:
        if not self.all_t:
            return Dataset.empty()
        ds = Dataset(self.all_t, self.all_o, np.asarray(self.all_loc), self.all_v)
        if up_to is not None:
            keep = ds.times <= up_to + 1e-12
            ds = ds.take(keep)
        return ds

    def _fit_union(self, up_to=None):
        data = downsample(self._union_dataset(up_to), self.pcfg.n_max)
        init = GpHyperParams(0.1 * self.arena.diagonal, 1.0, 0.05)
        return fit(data, init, self.planner.fit_cfg)

    def _take_snapshot(self, t_s):
        model = self._fit_union(up_to=t_s)
        pts, xs, ys = self.arena.grid(self.cfg.snapshot_grid)
        n = self.cfg.snapshot_grid
        mean = np.empty(len(pts))
        std = np.empty(len(pts))
        for i in range(0, len(pts), 4096):
            mean[i : i + 4096] = model.mean(pts[i : i + 4096])
            std[i : i + 4096] = model.std(pts[i : i + 4096])
        self.snapshots[float(t_s)] = {
            "xs": xs,
            "ys": ys,
            "mean": mean.reshape(n, n),
            "std": std.reshape(n, n),
        }

    # -- main loop -------------------------------------------------------

    def run(self) -> SimResult:
        self.log.append(
            {
                "event": "start",
                "case": self.case.name,
                "m": self.cfg.m,
                "variant": self.pcfg.variant,
                "seed": self.cfg.seed,
                "penalty": self.cfg.penalty_enabled,
                "t_max": self.case.t_max,
                "sample_period": self.cfg.sample_period,
                "vicinity_checks": "samples+arrivals",
            }
        )
        for robot in self.robots:
            if self._check_vicinity(robot, robot.pose, 0):
                break
        if self.found is None:
            self._first_decisions()

        while self.events and self.found is None:
            ms, rank, rid = heapq.heappop(self.events)
            if ms > self.t_max_ms:
                break
            t_s = ms / 1000.0
            while self.pending_snaps and self.pending_snaps[0] <= t_s:
                self._take_snapshot(self.pending_snaps.pop(0))
            robot = self.robots[rid - 1]
            if rank == _RANK_SAMPLE:
                self._on_sample(robot, ms)
            else:
                self._on_arrive(robot, ms)

        if self.found is not None:
            termination = "source_found"
            t_achieved = self.found[0] / 1000.0
            found_by = self.found[1]
        else:
            termination = "timeout"
            t_achieved = self.case.t_max
            found_by = None
            self.log.append({"event": "timeout", "t": self.case.t_max})

        final_model = self._fit_union()
        rmse = mapping_rmse(final_model, self.fld, self.arena)
        per_robot = {}
        if self.cfg.per_robot_rmse:
            for robot in self.robots:
                own = robot.flush_leg()
                data = robot.knowledge.data.merge(own) if len(own) else robot.knowledge.data
                model = fit(
                    downsample(data, self.pcfg.n_max),
                    GpHyperParams(0.1 * self.arena.diagonal, 1.0, 0.05),
                    self.planner.fit_cfg,
                )
                per_robot[robot.id] = mapping_rmse(model, self.fld, self.arena)
        if self.cfg.final_snapshot:
            self._take_snapshot(t_achieved)

        return SimResult(
            termination=termination,
            t_achieved=t_achieved,
            tau=relative_completion_time(t_achieved, self.case.t_idealized),
            mapping_rmse=rmse,
            found_by=found_by,
            per_robot_rmse=per_robot,
            trajectories=self.traj,
            event_log=self.log,
            snapshots=self.snapshots,
            final_hyper=final_model.hyper if len(final_model.training) else None,
            plan_times=self.plan_times,
            case_name=self.case.name,
            m=self.cfg.m,
            variant=self.pcfg.variant,
            seed=self.cfg.seed,
        )


def run_experiment(
    fld: GaussianMixtureField,
    case: CaseConfig,
    swarm_cfg: SwarmConfig,
    planner_cfg: PlannerConfig | None = None,
    acq_cfg: AcquisitionConfig | None = None,
    fit_cfg: GpFitConfig | None = None,
) -> SimResult:
    """Run one full search mission; deterministic given config + seed."""
    engine = _Engine(fld, case, swarm_cfg, planner_cfg, acq_cfg, fit_cfg)
    return engine.run()


# -- exhaustive-search baseline ----------------------------------------------


def _partition_regions(arena: Arena, m: int):
    """Sweep regions per robot: quadrants for m=5 (one split in half), else
    equal-width vertical strips."""
    if m == 5:
        midx = 0.5 * (arena.xmin + arena.xmax)
        midy = 0.5 * (arena.ymin + arena.ymax)
        quarter_x = 0.5 * (arena.xmin + midx)
        return [
            Arena(arena.xmin, arena.ymin, quarter_x, midy),
            Arena(quarter_x, arena.ymin, midx, midy),
            Arena(midx, arena.ymin, arena.xmax, midy),
            Arena(arena.xmin, midy, midx, arena.ymax),
            Arena(midx, midy, arena.xmax, arena.ymax),
        ]
    xs = np.linspace(arena.xmin, arena.xmax, m + 1)
    return [Arena(xs[i], arena.ymin, xs[i + 1], arena.ymax) for i in range(m)]


def _lane_waypoints(region: Arena, eps: float):
    """Serpentine lanes spaced 2*eps covering the region laterally within eps."""
    x0, x1 = region.xmin + eps, region.xmax - eps
    if x1 <= x0:
        lanes = [0.5 * (region.xmin + region.xmax)]
    else:
        n = int(math.floor((x1 - x0) / (2.0 * eps) + 1e-12)) + 1
        lanes = [x0 + 2.0 * eps * i for i in range(n)]
        if lanes[-1] < x1 - 1e-9:
            lanes.append(x1)
    pts = []
    for i, lx in enumerate(lanes):
        if i % 2 == 0:
            pts.append((lx, region.ymin))
            pts.append((lx, region.ymax))
        else:
            pts.append((lx, region.ymax))
            pts.append((lx, region.ymin))
    return np.asarray(pts)


def _segment_entry(a, b, src, eps):
    """Earliest parameter in [0, 1] where the segment enters the eps-ball."""
    d = b - a
    f = a - src
    c0 = float(f @ f) - eps * eps
    if c0 <= 0.0:
        return 0.0
    aa = float(d @ d)
    if aa < 1e-18:
        return None
    bb = 2.0 * float(f @ d)
    disc = bb * bb - 4.0 * aa * c0
    if disc < 0.0:
        return None
    tau = (-bb - math.sqrt(disc)) / (2.0 * aa)
    if 0.0 <= tau <= 1.0:
        return tau
    return None


def run_exhaustive_baseline(
    fld: GaussianMixtureField,
    case: CaseConfig,
    m: int,
    t_max: float | None = None,
) -> SimResult:
    """Parallel boustrophedon sweep baseline; no modeling, no communication.

    Detection is continuous along the path (the lane geometry assumes it).
    `t_max` of None uses the case budget; pass math.inf to let the sweep run
    to completion the way the reference comparisons do.
    """
    if m < 1:
        raise ValueError("need at least one robot")
    arena = fld.arena
    start = np.asarray(case.start, dtype=float)
    if not arena.contains(start):
        raise ValueError("swarm start lies outside the arena")
    cap = case.t_max if t_max is None else float(t_max)
    source = fld.source
    eps = case.detection_radius
    regions = _partition_regions(arena, m)
    log = [
        {
            "event": "start",
            "case": case.name,
            "m": m,
            "variant": "exhaustive",
            "seed": 0,
            "penalty": False,
            "t_max": cap if math.isfinite(cap) else None,
        }
    ]

    paths = []
    for i, region in enumerate(regions):
        wps = _lane_waypoints(region, eps)
        paths.append(np.vstack([start[None, :], wps]))
        log.append(
            {
                "event": "region",
                "robot": i + 1,
                "bounds": [region.xmin, region.ymin, region.xmax, region.ymax],
                "n_waypoints": len(wps),
            }
        )

    best = None  # (t_entry_s, robot)
    for rid, path in enumerate(paths, start=1):
        elapsed = 0.0
        for a, b in zip(path[:-1], path[1:]):
            seg_len = float(np.linalg.norm(b - a))
            tau = _segment_entry(a, b, source, eps)
            if tau is not None:
                t_entry = elapsed + tau * seg_len / case.speed
                if best is None or t_entry < best[0]:
                    best = (t_entry, rid)
                break
            elapsed += seg_len / case.speed

    if best is not None and best[0] <= cap:
        t_achieved = math.ceil(best[0] * 1000.0 - 1e-9) / 1000.0
        termination = "source_found"
        found_by = best[1]
        log.append({"event": "found", "t": t_achieved, "robot": found_by, "dist": eps})
    else:
        t_achieved = cap
        termination = "timeout"
        found_by = None
        log.append({"event": "timeout", "t": cap})

    traj = []
    for rid, path in enumerate(paths, start=1):
        seg_end_t = np.concatenate(
            [[0.0], np.cumsum(np.linalg.norm(np.diff(path, axis=0), axis=1)) / case.speed]
        )
        total = seg_end_t[-1]
        t = 0.0
        while t <= min(t_achieved, total) + 1e-9:
            j = int(np.searchsorted(seg_end_t, t, side="right")) - 1
            j = min(j, len(path) - 2)
            span = seg_end_t[j + 1] - seg_end_t[j]
            frac = 0.0 if span <= 0 else (t - seg_end_t[j]) / span
            pos = path[j] + frac * (path[j + 1] - path[j])
            traj.append((t, rid, float(pos[0]), float(pos[1]), float(evaluate(fld, arena.clip(pos)))))
            t += 1.0

    return SimResult(
        termination=termination,
        t_achieved=t_achieved,
        tau=relative_completion_time(t_achieved, case.t_idealized),
        mapping_rmse=float("nan"),
        found_by=found_by,
        per_robot_rmse={},
        trajectories=traj,
        event_log=log,
        snapshots={},
        final_hyper=None,
        plan_times=[],
        case_name=case.name,
        m=m,
        variant="exhaustive",
        seed=0,
    )
