"""Mission evaluation: relative completion time and mapping error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import Arena, GaussianMixtureField, evaluate
from .gp import GpModel

__all__ = ["MetricReport", "relative_completion_time", "mapping_rmse"]


@dataclass(frozen=True)
class MetricReport:
    tau: float
    rmse: float
    t_achieved: float
    t_idealized: float
    grid_n: int = 100


def relative_completion_time(t_achieved: float, t_idealized: float) -> float:
    """(t_achieved - t_idealized) / t_idealized; 0 means a perfect beeline."""
    if t_idealized <= 0:
        raise ValueError("t_idealized must be positive")
    return (t_achieved - t_idealized) / t_idealized


def mapping_rmse(
    model: GpModel,
    fld: GaussianMixtureField,
    arena: Arena | None = None,
    grid_n: int = 100,
    predict=None,
) -> float:
    """RMSE between the model's posterior mean and the noiseless field.

    Evaluated on a fixed grid_n x grid_n uniform grid (10,000 points by
    default) in a fixed traversal order with compensated summation, so the
    result is reproducible bit-for-bit. `predict` may override the posterior
    mean callable (used by tests with stub models).
    """
    arena = arena or fld.arena
    pts, _, _ = arena.grid(grid_n)
    truth = evaluate(fld, pts)
    if predict is None:
        pred = np.empty(len(pts))
        for i in range(0, len(pts), 4096):
            pred[i : i + 4096] = model.mean(pts[i : i + 4096])
    else:
        pred = np.asarray(predict(pts), dtype=float)
    err = pred - truth
    return math.sqrt(math.fsum(float(e) * float(e) for e in err) / len(err))
