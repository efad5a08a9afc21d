"""Synthetic 2-D signal environments: Gaussian-mixture fields with a known source."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

__all__ = [
    "Arena",
    "GaussianComponent",
    "GaussianMixtureField",
    "CaseConfig",
    "evaluate",
    "observe",
    "case1_preset",
    "case2_preset",
    "load_field_file",
    "save_field_file",
]


@dataclass(frozen=True)
class Arena:
    """Axis-aligned rectangular search area, coordinates in meters."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("degenerate arena: max bounds must exceed min bounds")

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.xmin, self.ymin])

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.xmax, self.ymax])

    @property
    def diagonal(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin)

    def contains(self, x, atol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(
            np.all(x.reshape(-1, 2) >= self.lower - atol)
            and np.all(x.reshape(-1, 2) <= self.upper + atol)
        )

    def clip(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)

    def sample(self, rng: np.random.Generator, n: int = 1) -> np.ndarray:
        pts = rng.uniform(self.lower, self.upper, size=(n, 2))
        return pts

    def grid(self, n: int):
        """Uniform n-by-n grid including the boundary; returns (points (n*n,2), xs, ys)."""
        xs = np.linspace(self.xmin, self.xmax, n)
        ys = np.linspace(self.ymin, self.ymax, n)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()]), xs, ys


@dataclass(frozen=True)
class GaussianComponent:
    center: tuple
    amplitude: float
    spread: float

    def __post_init__(self):
        if self.amplitude <= 0 or self.spread <= 0:
            raise ValueError("component amplitude and spread must be positive")


@dataclass(frozen=True)
class GaussianMixtureField:
    """Sum of isotropic Gaussian bumps over an arena.

    Exactly one component must dominate so the global source is unambiguous.
    `noise_std` is the observation noise used by :func:`observe`; the field
    itself is deterministic and noiseless.
    """

    components: tuple
    arena: Arena
    noise_std: float = 0.01

    def __post_init__(self):
        if not self.components:
            raise ValueError("field needs at least one component")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        comps = tuple(
            c if isinstance(c, GaussianComponent) else GaussianComponent(**c)
            for c in self.components
        )
        object.__setattr__(self, "components", comps)
        for c in comps:
            if not self.arena.contains(np.asarray(c.center)):
                raise ValueError(f"component center {c.center} outside arena")
        peaks = self._values(np.array([c.center for c in comps], dtype=float))
        order = np.argsort(peaks)
        if len(peaks) > 1 and not peaks[order[-1]] > peaks[order[-2]] + 1e-12:
            raise ValueError("global source ambiguous: two components tie for the peak")
        object.__setattr__(self, "_source_index", int(order[-1]))

    @property
    def source(self) -> np.ndarray:
        """Location of the strongest mode (the search target)."""
        return np.asarray(self.components[self._source_index].center, dtype=float)

    def _values(self, x: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(pts))
        for c in self.components:
            d2 = np.sum((pts - np.asarray(c.center)) ** 2, axis=1)
            out += c.amplitude * np.exp(-d2 / (2.0 * c.spread**2))
        return out


def evaluate(field: GaussianMixtureField, x) -> float | np.ndarray:
    """Noiseless signal strength at `x` (a 2-vector or an (n, 2) array).

    Raises ValueError for queries outside the arena.
    """
    x = np.asarray(x, dtype=float)
    if not field.arena.contains(x):
        raise ValueError(f"query {x!r} outside arena")
    vals = field._values(x)
    return float(vals[0]) if x.ndim == 1 else vals


def observe(field: GaussianMixtureField, x, rng: np.random.Generator):
    """Noisy measurement: evaluate(field, x) + N(0, noise_std^2) from `rng`."""
    clean = evaluate(field, x)
    if field.noise_std == 0.0:
        return clean
    noise = rng.normal(0.0, field.noise_std, size=np.shape(clean) or None)
    return clean + noise


@dataclass(frozen=True)
class CaseConfig:
    """Mission parameters paired with a field preset."""

    name: str
    start: tuple
    t_max: float            # mission time budget, s
    t_idealized: float      # straight-line start-to-source time, s
    speed: float            # robot speed V, m/s
    horizon: float          # planning horizon T, s (step bound = speed * horizon)
    signal_max: float       # known upper bound on the field (M)
    lipschitz: float        # Lipschitz bound on the field (L)
    detection_radius: float  # termination vicinity around the source, m
    delta_theta: float = 360.0  # initial feasible direction range, degrees
    meta: dict = dc_field(default_factory=dict)

    @property
    def step_bound(self) -> float:
        return self.speed * self.horizon


# Preset geometry: sources sit exactly speed * t_idealized from the start so the
# idealized beeline time in the config is met with equality.
_CASE1_SOURCE = (
    0.05 + 2.98 * math.cos(math.pi / 6),
    0.05 + 2.98 * math.sin(math.pi / 6),
)
_CASE2_SOURCE = (
    1.0 + 28.12 * math.cos(math.radians(17.0)),
    1.0 + 28.12 * math.sin(math.radians(17.0)),
)


def case1_preset():
    """Small arena, bimodal signal: one strong source plus one weaker decoy."""
    arena = Arena(0.0, 0.0, 3.0, 3.0)
    fld = GaussianMixtureField(
        components=(
            GaussianComponent(_CASE1_SOURCE, 1.0, 0.60),
            GaussianComponent((0.5, 2.6), 0.6, 0.35),
        ),
        arena=arena,
        noise_std=0.01,
    )
    cfg = CaseConfig(
        name="case1",
        start=(0.05, 0.05),
        t_max=100.0,
        t_idealized=29.8,
        speed=0.1,
        horizon=5.0,
        signal_max=1.0,
        lipschitz=20.0,
        detection_radius=0.05,
        delta_theta=90.0,  # corner start: feasible headings span one quadrant
    )
    return fld, cfg


def case2_preset():
    """Large arena, multimodal signal: ten modes, one global source."""
    arena = Arena(0.0, 0.0, 30.0, 30.0)
    # Broad modes tile most of the arena so the swarm's model saturates from
    # coarse coverage; the strongest mode keeps a tail moat so it alone sets
    # the field maximum.
    fld = GaussianMixtureField(
        components=(
            GaussianComponent(_CASE2_SOURCE, 1.0, 2.5),
            GaussianComponent((13.0, 4.0), 0.65, 1.2),
            GaussianComponent((21.0, 3.5), 0.45, 1.1),
            GaussianComponent((21.5, 17.0), 0.55, 1.2),
            GaussianComponent((5.0, 5.0), 0.55, 2.2),
            GaussianComponent((4.0, 14.0), 0.6, 2.4),
            GaussianComponent((12.5, 13.0), 0.7, 2.0),
            GaussianComponent((4.0, 23.0), 0.45, 2.2),
            GaussianComponent((12.5, 22.5), 0.5, 2.0),
            GaussianComponent((21.0, 26.0), 0.4, 1.8),
        ),
        arena=arena,
        noise_std=0.01,
    )
    cfg = CaseConfig(
        name="case2",
        start=(1.0, 1.0),
        t_max=1000.0,
        t_idealized=140.6,
        speed=0.2,
        horizon=20.0,
        signal_max=1.0,
        lipschitz=200.0,
        detection_radius=0.2,
        delta_theta=90.0,
    )
    return fld, cfg


PRESETS = {"case1": case1_preset, "case2": case2_preset}


def _field_to_dict(fld: GaussianMixtureField, cfg: CaseConfig | None = None) -> dict:
    doc = {
        "arena": [fld.arena.xmin, fld.arena.ymin, fld.arena.xmax, fld.arena.ymax],
        "noise_std": fld.noise_std,
        "components": [
            {"center": list(map(float, c.center)), "amplitude": c.amplitude, "spread": c.spread}
            for c in fld.components
        ],
    }
    if cfg is not None:
        doc["mission"] = {
            "name": cfg.name,
            "start": list(map(float, cfg.start)),
            "t_max": cfg.t_max,
            "t_idealized": cfg.t_idealized,
            "speed": cfg.speed,
            "horizon": cfg.horizon,
            "signal_max": cfg.signal_max,
            "lipschitz": cfg.lipschitz,
            "detection_radius": cfg.detection_radius,
            "delta_theta": cfg.delta_theta,
        }
    return doc


def save_field_file(path, fld: GaussianMixtureField, cfg: CaseConfig | None = None):
    with open(path, "w") as fh:
        json.dump(_field_to_dict(fld, cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_field_file(path):
    """Load a field definition (and mission config, when present) from JSON."""
    with open(path) as fh:
        doc = json.load(fh)
    arena = Arena(*doc["arena"])
    fld = GaussianMixtureField(
        components=tuple(
            GaussianComponent(tuple(c["center"]), c["amplitude"], c["spread"])
            for c in doc["components"]
        ),
        arena=arena,
        noise_std=doc.get("noise_std", 0.01),
    )
    cfg = None
    if "mission" in doc:
        mis = doc["mission"]
        t_ideal = mis.get("t_idealized")
        if t_ideal is None:
            t_ideal = float(np.linalg.norm(fld.source - np.asarray(mis["start"]))) / mis["speed"]
        cfg = CaseConfig(
            name=mis.get("name", "custom"),
            start=tuple(mis["start"]),
            t_max=mis["t_max"],
            t_idealized=t_ideal,
            speed=mis["speed"],
            horizon=mis["horizon"],
            signal_max=mis["signal_max"],
            lipschitz=mis["lipschitz"],
            detection_radius=mis["detection_radius"],
            delta_theta=mis.get("delta_theta", 360.0),
        )
    return fld, cfg
