"""Waypoint-selection objective for decentralized swarm search.

The objective for robot r at candidate endpoint x is

    (alpha * exploit(x) + (1 - alpha) * beta * explore(x)) * penalty(x)

subject to ||x - current_pos|| <= step_bound. `exploit` pulls toward the
posterior-mean maximizer, `explore` is the average posterior std along the
straight path to x (conditioned on peers' planned sample locations), and
`penalty` discounts candidates near peers' planned waypoints using a
Lipschitz exclusion-ball probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import erfc

from .field import Arena
from .gp import GpModel

__all__ = [
    "AcquisitionConfig",
    "PeerPlan",
    "CandidatePath",
    "AcquisitionContext",
    "alpha_schedule",
    "exploit_term",
    "find_x_star",
    "explore_term",
    "local_penalty",
    "effective_penalty",
    "acquisition_value",
]


@dataclass(frozen=True)
class AcquisitionConfig:
    """Tunables for the objective; defaults follow the mission presets."""

    beta: float = 50.0            # scaling aligning exploit and explore magnitudes
    quad_nodes: int = 11          # trapezoid nodes for the path integral
    arc_length_weight: bool = False  # multiply explore term by path length
    sigma_floor_rel: float = 1e-6    # floor on peer-waypoint std, relative to prior std


def alpha_schedule(t: float, t_max: float) -> float:
    """Time-adaptive exploitation weight: sigmoid from ~0.03 at t=0 to ~1.

    Crosses 0.5 at one third of the mission and ~0.975 at 70%.
    """
    if not 0.0 <= t <= t_max:
        raise ValueError("t must lie in [0, t_max]")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    return 1.0 / (1.0 + math.exp(-10.0 * (t / t_max - 1.0 / 3.0)))


def exploit_term(x, x_star):
    """Inverse-quadratic attraction toward the current mean maximizer.

    Accepts a single point or an (n, 2) batch; equals 1 at x_star and decays
    with squared distance.
    """
    x = np.asarray(x, dtype=float)
    d2 = np.sum((np.atleast_2d(x) - np.asarray(x_star, dtype=float)) ** 2, axis=1)
    out = 1.0 / (1.0 + d2)
    return float(out[0]) if x.ndim == 1 else out


def local_penalty(x, peer_wp, mu_p: float, sigma_p: float, signal_max: float, lipschitz: float):
    """Probability that `x` escapes the exclusion ball around a peer waypoint.

    The ball radius is Gaussian with mean (signal_max - mu_p) / lipschitz and
    std sigma_p / lipschitz, which yields
    0.5 * erfc(-(L*d - M + mu_p) / sqrt(2 sigma_p^2)).
    """
    if sigma_p <= 0:
        raise ValueError("sigma_p must be positive (floor it upstream)")
    x = np.asarray(x, dtype=float)
    d = np.linalg.norm(np.atleast_2d(x) - np.asarray(peer_wp, dtype=float), axis=1)
    z = (lipschitz * d - signal_max + mu_p) / math.sqrt(2.0 * sigma_p**2)
    out = 0.5 * erfc(-z)
    return float(out[0]) if x.ndim == 1 else out


@dataclass(frozen=True)
class PeerPlan:
    """A peer's latest announced plan: its waypoint and en-route sample spots."""

    position: np.ndarray
    path_points: np.ndarray  # (k, 2); may be empty

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(2))
        object.__setattr__(
            self, "path_points", np.asarray(self.path_points, dtype=float).reshape(-1, 2)
        )


@dataclass(frozen=True)
class CandidatePath:
    """Straight segment s(u) = u*end + (1-u)*start, u in [0, 1]."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", np.asarray(self.start, dtype=float).reshape(2))
        object.__setattr__(self, "end", np.asarray(self.end, dtype=float).reshape(2))

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))


class AcquisitionContext:
    """Everything one waypoint decision needs, with cached factorizations.

    Immutable once built; safe to evaluate from many candidate points. The
    explore term conditions on `peers`' path points; the penalty uses their
    waypoints, with mean/std read from the base model at those waypoints.
    """

    def __init__(
        self,
        gp: GpModel,
        current_pos,
        peers,
        alpha: float,
        beta: float,
        signal_max: float,
        lipschitz: float,
        step_bound: float,
        x_star,
        quad_nodes: int = 11,
        arc_length_weight: bool = False,
        sigma_floor_rel: float = 1e-6,
        penalty_enabled: bool = True,
    ):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if beta <= 0 or lipschitz <= 0 or step_bound <= 0:
            raise ValueError("beta, lipschitz and step_bound must be positive")
        if quad_nodes < 2:
            raise ValueError("need at least two quadrature nodes")
        self.gp = gp
        self.current_pos = np.asarray(current_pos, dtype=float).reshape(2)
        self.peers = tuple(peers)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.signal_max = float(signal_max)
        self.lipschitz = float(lipschitz)
        self.step_bound = float(step_bound)
        self.x_star = np.asarray(x_star, dtype=float).reshape(2)
        self.arc_length_weight = bool(arc_length_weight)
        self.penalty_enabled = bool(penalty_enabled)

        u = np.linspace(0.0, 1.0, quad_nodes)
        w = np.full(quad_nodes, 1.0 / (quad_nodes - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        self._quad_u = u
        self._quad_w = w

        if self.peers:
            virtual = np.vstack([p.path_points for p in self.peers]) if any(
                len(p.path_points) for p in self.peers
            ) else np.zeros((0, 2))
            self._aug = gp.augment(virtual)
            wps = np.vstack([p.position for p in self.peers])
            self._peer_wps = wps
            self._peer_mu = gp.mean(wps)
            floor = sigma_floor_rel * gp.hyper.signal_std
            self._peer_sigma = np.maximum(gp.std(wps), floor)
        else:
            self._aug = gp.augment(np.zeros((0, 2)))
            self._peer_wps = np.zeros((0, 2))
            self._peer_mu = np.zeros(0)
            self._peer_sigma = np.zeros(0)

    def explore_batch(self, ends: np.ndarray) -> np.ndarray:
        """Path-averaged augmented posterior std for each candidate endpoint."""
        ends = np.atleast_2d(ends)
        u = self._quad_u
        nodes = u[None, :, None] * ends[:, None, :] + (1.0 - u)[None, :, None] * self.current_pos
        sig = self._aug.std(nodes.reshape(-1, 2)).reshape(len(ends), len(u))
        out = sig @ self._quad_w
        if self.arc_length_weight:
            out = out * np.linalg.norm(ends - self.current_pos, axis=1)
        return out

    def penalty_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        if not self.penalty_enabled or len(self._peer_wps) == 0:
            return np.ones(len(x))
        d = np.linalg.norm(x[:, None, :] - self._peer_wps[None, :, :], axis=2)
        z = (self.lipschitz * d - self.signal_max + self._peer_mu[None, :]) / np.sqrt(
            2.0 * self._peer_sigma[None, :] ** 2
        )
        return np.prod(0.5 * erfc(-z), axis=1)

    def value_batch(self, x: np.ndarray) -> np.ndarray:
        """Objective at candidate endpoints (no feasibility check)."""
        x = np.atleast_2d(x)
        omega = exploit_term(x, self.x_star)
        sigma = self.explore_batch(x)
        gamma = self.penalty_batch(x)
        return (self.alpha * omega + (1.0 - self.alpha) * self.beta * sigma) * gamma


def explore_term(ctx: AcquisitionContext, path: CandidatePath) -> float:
    """Trapezoid quadrature of augmented posterior std along the path."""
    if path.length > ctx.step_bound + 1e-9:
        raise ValueError("candidate path violates the motion constraint")
    if not np.allclose(path.start, ctx.current_pos):
        raise ValueError("path must start at the context's current position")
    return float(ctx.explore_batch(path.end[None, :])[0])


def effective_penalty(ctx: AcquisitionContext, x) -> float:
    """Product of per-peer local penalties; 1 with no peers."""
    x = np.asarray(x, dtype=float)
    out = ctx.penalty_batch(x)
    return float(out[0]) if x.ndim == 1 else out


def acquisition_value(ctx: AcquisitionContext, x) -> float:
    """Full objective at a feasible candidate; raises outside the step disk."""
    x = np.asarray(x, dtype=float).reshape(2)
    if np.linalg.norm(x - ctx.current_pos) > ctx.step_bound + 1e-9:
        raise ValueError("candidate outside the reachable disk")
    return float(ctx.value_batch(x[None, :])[0])


def find_x_star(
    gp: GpModel,
    arena: Arena,
    init_hint,
    prev=None,
    rng: np.random.Generator | None = None,
    n_random: int = 3,
    max_iter: int = 200,
):
    """Locate a maximizer of the posterior mean over the arena.

    Multi-start bounded quasi-Newton with finite-difference gradients; starts
    are `init_hint` (best observed location), `prev` (last maximizer, when
    given) and `n_random` arena points from `rng`. Returns (point, converged);
    a flat mean surface returns `init_hint` unchanged.
    """
    init_hint = arena.clip(np.asarray(init_hint, dtype=float).reshape(2))
    starts = [init_hint]
    if prev is not None:
        starts.append(arena.clip(np.asarray(prev, dtype=float).reshape(2)))
    if n_random > 0:
        r = rng if rng is not None else np.random.default_rng(0)
        starts.extend(arena.sample(r, n_random))

    start_vals = gp.mean(np.vstack(starts))
    if float(np.ptp(start_vals)) < 1e-12:
        return init_hint.copy(), True

    bounds = [(arena.xmin, arena.xmax), (arena.ymin, arena.ymax)]

    def neg_mean(p):
        return -float(gp.mean(p[None, :])[0])

    best_x, best_v, converged = init_hint, float(start_vals[0]), True
    for p0 in starts:
        res = minimize(
            neg_mean,
            p0,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": max_iter},
        )
        if np.isfinite(res.fun) and -res.fun > best_v:
            best_x, best_v, converged = res.x.copy(), -float(res.fun), bool(res.success)
    return arena.clip(best_x), converged
