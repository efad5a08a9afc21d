"""Waypoint planning: first-step dispersion, data capping, and constrained
maximization of the acquisition objective over the reachable disk."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .acquisition import AcquisitionConfig, AcquisitionContext, find_x_star
from .field import Arena
from .gp import Dataset, GpFitConfig, GpHyperParams, GpModel, fit

__all__ = [
    "PlannerConfig",
    "PlanResult",
    "WaypointPlanner",
    "first_waypoint",
    "downsample",
    "plan_next_waypoint",
]

VARIANTS = ("full", "sync", "explorative")


@dataclass(frozen=True)
class PlannerConfig:
    speed: float                 # V, m/s
    horizon: float               # T, s; step bound is speed * horizon
    n_max: int = 1000            # cap on records used per GP fit
    delta_theta: float = 360.0   # initial feasible direction range, degrees
    variant: str = "full"
    alpha_override: float | None = None
    n_random_starts: int = 4     # random restarts for the waypoint search
    max_iter: int = 200

    def __post_init__(self):
        if self.speed <= 0 or self.horizon <= 0:
            raise ValueError("speed and horizon must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not 0.0 < self.delta_theta <= 360.0:
            raise ValueError("delta_theta must lie in (0, 360]")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    @property
    def step_bound(self) -> float:
        return self.speed * self.horizon


def first_waypoint(r: int, m: int, cfg: PlannerConfig) -> np.ndarray:
    """Dispersion offset for robot r of m before any data exists.

    Heading r*dt/m for a full circle, else r*dt/(m+1) inside the feasible
    range; distance is one full step. Returned relative to the launch point.
    """
    if not 1 <= r <= m:
        raise ValueError("robot index out of range")
    d = cfg.speed * cfg.horizon
    if cfg.delta_theta == 360.0:
        theta = r * cfg.delta_theta / m
    else:
        theta = r * cfg.delta_theta / (m + 1)
    th = math.radians(theta)
    return np.array([d * math.cos(th), d * math.sin(th)])


def downsample(data: Dataset, n_max: int) -> Dataset:
    """Integer-stride thinning to at most n_max records.

    The stride walks each observer's records in time order (block-wise) so
    that simultaneous-sampling interleave cannot alias against the stride:
    records arrive round-robin by observer each second, and a plain stride
    with gcd(stride, observer count) > 1 would silently drop whole robots.
    Every observer is thinned to the same 1-in-q rate; the result is returned
    in the usual (time, observer) order.
    """
    n = len(data)
    if n <= n_max:
        return data
    stride = math.ceil(n / n_max)
    by_observer = np.lexsort((data.times, data.observers))
    return data.take(np.sort(by_observer[::stride]))


@dataclass
class PlanResult:
    waypoint: np.ndarray
    alpha: float
    acq_value: float
    fallback: bool
    x_star: np.ndarray | None
    x_star_converged: bool
    hyper: GpHyperParams
    model: GpModel
    sync_clipped: bool
    n_data: int


def mission_fit_config(arena: Arena, signal_max: float) -> GpFitConfig:
    """Hyperparameter search box informed by known mission scales.

    The arena size bounds plausible correlation lengths and the known peak
    signal strength keeps the prior variance from collapsing on flat early
    data (a degenerate flat fit would silence the explore term and stall the
    search).
    """
    diag = arena.diagonal
    return GpFitConfig(
        lower=(1e-3 * diag, 0.05 * signal_max, 1e-8),
        upper=(0.25 * diag, 3.0 * signal_max, float(signal_max)),
    )


class WaypointPlanner:
    """Reusable planning machinery bound to one arena/mission configuration.

    Each `plan` call is a pure function of its snapshot arguments; the seeded
    restart points derive from `seed_key`, so replaying a snapshot reproduces
    the same waypoint.
    """

    def __init__(
        self,
        cfg: PlannerConfig,
        acq_cfg: AcquisitionConfig,
        arena: Arena,
        signal_max: float,
        lipschitz: float,
        t_max: float,
        penalty_enabled: bool = True,
        fit_cfg: GpFitConfig | None = None,
        refit: str = "always",
    ):
        if refit not in ("always", "freeze"):
            raise ValueError("refit must be 'always' or 'freeze'")
        self.cfg = cfg
        self.acq_cfg = acq_cfg
        self.arena = arena
        self.signal_max = signal_max
        self.lipschitz = lipschitz
        self.t_max = t_max
        self.penalty_enabled = penalty_enabled
        self.fit_cfg = fit_cfg or mission_fit_config(arena, signal_max)
        self.refit = refit

    def _default_init(self) -> GpHyperParams:
        return GpHyperParams(0.1 * self.arena.diagonal, 1.0, 0.05)

    def fit_model(
        self, data: Dataset, prev_hyper: GpHyperParams | None, reuse_fit: bool = False
    ) -> GpModel:
        capped = downsample(data, self.cfg.n_max)
        if prev_hyper is not None and (reuse_fit or self.refit == "freeze"):
            return GpModel(prev_hyper, capped)
        init = prev_hyper or self._default_init()
        cfg = self.fit_cfg
        if prev_hyper is not None and not cfg.warm_only:
            # warm refit: single start; the evaluation cap trims pathological
            # line searches without measurably moving the optimum
            cfg = GpFitConfig(
                max_iter=cfg.max_iter, rel_tol=cfg.rel_tol, noise_floor=cfg.noise_floor,
                lower=cfg.lower, upper=cfg.upper, warm_only=True, max_fun=8,
            )
        return fit(capped, init, cfg)

    def _alpha(self, t_now: float) -> float:
        from .acquisition import alpha_schedule

        if self.cfg.variant == "explorative":
            return 0.0
        if self.cfg.alpha_override is not None:
            return float(self.cfg.alpha_override)
        return alpha_schedule(min(t_now, self.t_max), self.t_max)

    def _project_disk(self, point: np.ndarray, pose: np.ndarray) -> np.ndarray:
        step = self.cfg.step_bound
        delta = point - pose
        d = float(np.linalg.norm(delta))
        if self.cfg.variant == "sync":
            if d < 1e-12:
                return pose + np.array([step, 0.0])
            return pose + delta * (step / d)
        if d <= step:
            return point.copy()
        return pose + delta * (step / d)

    def _optimize(self, ctx: AcquisitionContext, pose: np.ndarray, seeds, rng):
        """Multi-start bounded quasi-Newton search in polar coordinates."""
        step = ctx.step_bound
        sync = self.cfg.variant == "sync"

        def to_polar(pt):
            delta = pt - pose
            r = float(np.linalg.norm(delta))
            th = math.atan2(delta[1], delta[0]) if r > 1e-12 else 0.0
            return (th,) if sync else (min(r, step), th)

        def candidate(z):
            r = step if sync else min(max(z[0], 0.0), step)
            th = z[-1]
            return self.arena.clip(pose + r * np.array([math.cos(th), math.sin(th)]))

        h = (1e-6 * max(step, 1.0), 1e-6)

        def fg(z):
            pts = [candidate(z)]
            for i in range(len(z)):
                zp = np.array(z, dtype=float)
                zp[i] += h[i] if not sync else h[1]
                pts.append(candidate(zp))
            vals = ctx.value_batch(np.vstack(pts))
            f = -vals[0]
            g = np.array([
                -(vals[i + 1] - vals[0]) / (h[i] if not sync else h[1])
                for i in range(len(z))
            ])
            return f, g

        starts = [to_polar(s) for s in seeds]
        n_rand = self.cfg.n_random_starts
        if n_rand > 0:
            if sync:
                starts.extend((float(a),) for a in rng.uniform(0, 2 * math.pi, n_rand))
            else:
                rr = step * np.sqrt(rng.uniform(0, 1, n_rand))
                aa = rng.uniform(0, 2 * math.pi, n_rand)
                starts.extend((float(r0), float(a0)) for r0, a0 in zip(rr, aa))

        bounds = [(None, None)] if sync else [(0.0, step), (None, None)]
        best = None
        for z0 in starts:
            try:
                res = minimize(
                    fg, np.array(z0, dtype=float), jac=True, method="L-BFGS-B",
                    bounds=bounds, options={"maxiter": self.cfg.max_iter},
                )
            except Exception:
                continue
            if not np.isfinite(res.fun):
                continue
            pt = candidate(res.x)
            val = float(ctx.value_batch(pt[None, :])[0])
            if best is None or val > best[0]:
                best = (val, pt)
        return best

    def plan(
        self,
        pose,
        data: Dataset,
        peers,
        t_now: float,
        seed_key,
        prev_hyper: GpHyperParams | None = None,
        prev_x_star=None,
        reuse_fit: bool = False,
    ) -> PlanResult:
        pose = np.asarray(pose, dtype=float).reshape(2)
        model = self.fit_model(data, prev_hyper, reuse_fit=reuse_fit)
        alpha = self._alpha(t_now)
        best_obs = model.training.best_location() if len(model.training) else pose.copy()

        rng = np.random.default_rng(np.random.SeedSequence(tuple(int(v) for v in seed_key)))
        if alpha == 0.0:
            x_star, xs_ok = self.arena.clip(best_obs), True
            x_star_out = None
        elif reuse_fit and prev_x_star is not None:
            x_star, xs_ok = self.arena.clip(np.asarray(prev_x_star, dtype=float)), True
            x_star_out = x_star
        else:
            x_star, xs_ok = find_x_star(
                model, self.arena, best_obs, prev=prev_x_star, rng=rng
            )
            x_star_out = x_star

        ctx = AcquisitionContext(
            model,
            pose,
            peers,
            alpha=alpha,
            beta=self.acq_cfg.beta,
            signal_max=self.signal_max,
            lipschitz=self.lipschitz,
            step_bound=self.cfg.step_bound,
            x_star=x_star,
            quad_nodes=self.acq_cfg.quad_nodes,
            arc_length_weight=self.acq_cfg.arc_length_weight,
            sigma_floor_rel=self.acq_cfg.sigma_floor_rel,
            penalty_enabled=self.penalty_enabled,
        )

        seeds = [self._project_disk(self.arena.clip(best_obs), pose),
                 self._project_disk(x_star, pose)]
        best = self._optimize(ctx, pose, seeds, rng)
        if best is None:
            wp = self.arena.clip(self._project_disk(x_star, pose))
            val = float(ctx.value_batch(wp[None, :])[0])
            fallback = True
        else:
            val, wp = best
            fallback = False

        step_len = float(np.linalg.norm(wp - pose))
        sync_clipped = (
            self.cfg.variant == "sync" and abs(step_len - self.cfg.step_bound) > 1e-6
        )
        return PlanResult(
            waypoint=wp,
            alpha=alpha,
            acq_value=val,
            fallback=fallback,
            x_star=x_star_out,
            x_star_converged=xs_ok,
            hyper=model.hyper,
            model=model,
            sync_clipped=sync_clipped,
            n_data=len(model.training),
        )


def plan_next_waypoint(
    pose,
    data: Dataset,
    peers,
    cfg: PlannerConfig,
    acq_cfg: AcquisitionConfig,
    arena: Arena,
    signal_max: float,
    lipschitz: float,
    t_now: float,
    t_max: float,
    seed_key=(0,),
    prev_hyper: GpHyperParams | None = None,
    prev_x_star=None,
    penalty_enabled: bool = True,
    fit_cfg: GpFitConfig | None = None,
) -> PlanResult:
    """One-shot form of :class:`WaypointPlanner` for a single snapshot."""
    planner = WaypointPlanner(
        cfg, acq_cfg, arena, signal_max, lipschitz, t_max,
        penalty_enabled=penalty_enabled, fit_cfg=fit_cfg,
    )
    return planner.plan(
        pose, data, peers, t_now, seed_key,
        prev_hyper=prev_hyper, prev_x_star=prev_x_star,
    )
