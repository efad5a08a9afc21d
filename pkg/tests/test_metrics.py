import math

import numpy as np
import pytest

from swarmsearch.field import case1_preset, evaluate
from swarmsearch.gp import Dataset, GpHyperParams, fit
from swarmsearch.metrics import mapping_rmse, relative_completion_time


class TestRelativeCompletionTime:
    def test_perfect_beeline_is_zero(self):
        assert relative_completion_time(29.8, 29.8) == 0.0

    def test_reference_arithmetic(self):
        # 36 s achieved against the 29.8 s ideal
        assert relative_completion_time(36.0, 29.8) == pytest.approx(0.2081, abs=1e-4)

    def test_double_time_is_one(self):
        assert relative_completion_time(59.6, 29.8) == pytest.approx(1.0)

    def test_linear_in_achieved_time(self):
        base = relative_completion_time(10.0, 5.0)
        assert relative_completion_time(20.0, 5.0) == pytest.approx(2 * base + 1.0)

    def test_nonpositive_ideal_rejected(self):
        with pytest.raises(ValueError):
            relative_completion_time(10.0, 0.0)
        with pytest.raises(ValueError):
            relative_completion_time(10.0, -3.0)


class TestMappingRmse:
    def test_exact_model_gives_zero(self):
        fld, _ = case1_preset()
        rmse = mapping_rmse(None, fld, predict=lambda pts: evaluate(fld, pts))
        assert rmse == 0.0

    def test_constant_offset_gives_offset(self):
        fld, _ = case1_preset()
        c = 0.37
        rmse = mapping_rmse(None, fld, predict=lambda pts: evaluate(fld, pts) + c)
        assert rmse == pytest.approx(c, rel=1e-12)

    def test_matches_two_loop_recomputation(self):
        fld, _ = case1_preset()
        rng = np.random.default_rng(0)
        X = fld.arena.sample(rng, 200)
        y = evaluate(fld, X) + 0.01 * rng.normal(size=200)
        ds = Dataset(np.arange(200.0), np.ones(200), X, y)
        model = fit(ds, GpHyperParams(0.5, 1.0, 0.05))
        rmse = mapping_rmse(model, fld)

        pts, _, _ = fld.arena.grid(100)
        total = 0.0
        for p in pts:
            err = float(model.mean(p[None, :])[0]) - evaluate(fld, p)
            total += err * err
        ref = math.sqrt(total / len(pts))
        assert rmse == pytest.approx(ref, rel=1e-12)
        assert rmse < 0.2

    def test_grid_is_ten_thousand_points(self):
        fld, _ = case1_preset()
        pts, xs, ys = fld.arena.grid(100)
        assert len(pts) == 10_000
        assert xs[0] == fld.arena.xmin and xs[-1] == fld.arena.xmax
