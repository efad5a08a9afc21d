import json
import math
from pathlib import Path

import numpy as np
import pytest

from swarmsearch.cli import main
from swarmsearch.field import case1_preset, save_field_file
from swarmsearch.harness import (
    ConfigError,
    ExperimentConfig,
    compare_table,
    config_hash,
    execute_run,
    resolve_case,
    run_seeds,
    sweep_table,
    write_run_record,
)


def fast_exp(**kw):
    """A small custom mission so CLI tests stay quick."""
    return ExperimentConfig(**{"m": 2, "seeds": (0,), "snapshot_grid": 15, **kw})


@pytest.fixture(scope="module")
def mission_file(tmp_path_factory):
    from swarmsearch.field import Arena, CaseConfig, GaussianComponent, GaussianMixtureField

    arena = Arena(0.0, 0.0, 2.0, 2.0)
    fld = GaussianMixtureField(
        (GaussianComponent((1.4, 1.2), 1.0, 0.35),), arena, 0.01
    )
    cfg = CaseConfig("minicase", (0.2, 0.2), 25.0, 16.12, 0.1, 3.0, 1.0, 20.0, 0.06, 90.0)
    path = tmp_path_factory.mktemp("fields") / "mini.json"
    save_field_file(path, fld, cfg)
    return str(path)


class TestConfigHandling:
    def test_hash_covers_behavior_fields(self, mission_file):
        a = fast_exp(case=mission_file)
        b = fast_exp(case=mission_file, beta=60.0)
        c = fast_exp(case=mission_file, output_dir="elsewhere")
        assert config_hash(a) != config_hash(b)
        assert config_hash(a) == config_hash(c)  # output location is not behavior

    def test_validation_names_offending_field(self):
        with pytest.raises(ConfigError, match="seeds"):
            ExperimentConfig(seeds=()).validate()
        with pytest.raises(ConfigError, match="m:"):
            ExperimentConfig(m=0).validate()
        with pytest.raises(ConfigError, match="variant"):
            ExperimentConfig(variant="bogus").validate()

    def test_resolve_case_missing_path(self):
        with pytest.raises(ConfigError, match="no/such/field.json"):
            resolve_case("no/such/field.json")

    def test_presets_resolve(self):
        fld, cfg = resolve_case("case1")
        ref_fld, ref_cfg = case1_preset()
        assert cfg == ref_cfg
        assert np.allclose(fld.source, ref_fld.source)


class TestRunRecord:
    def test_record_deterministic_and_valid(self, mission_file, tmp_path):
        exp = fast_exp(case=mission_file, seeds=(0, 1))
        s1 = run_seeds(exp)
        p1 = write_run_record(exp, s1, tmp_path / "a")
        s2 = run_seeds(exp)
        p2 = write_run_record(exp, s2, tmp_path / "b")
        rec1, rec2 = p1.read_text(), p2.read_text()
        assert rec1 == rec2
        doc = json.loads(rec1)
        assert doc["schema_version"] == 1
        assert doc["config_hash"] == config_hash(exp)
        assert {r["seed"] for r in doc["results"]} == {0, 1}
        for r in doc["results"]:
            assert r["termination"] in ("source_found", "timeout")
            assert r["tau"] >= -1.0

    def test_exhaustive_variant_runs(self, mission_file):
        exp = fast_exp(case=mission_file, variant="exhaustive")
        res = execute_run(exp, 0)
        assert res.variant == "exhaustive"
        assert math.isnan(res.mapping_rmse)

    def test_worker_pool_matches_serial(self, mission_file):
        exp = fast_exp(case=mission_file, seeds=(0, 1))
        serial = run_seeds(exp, workers=1)
        pooled = run_seeds(exp, workers=2)
        assert set(serial) == set(pooled)
        for s in serial:
            assert serial[s].tau == pooled[s].tau
            assert serial[s].rmse == pooled[s].rmse
            assert serial[s].termination == pooled[s].termination


class TestTables:
    def test_compare_requires_two_variants(self, mission_file):
        with pytest.raises(ConfigError, match="variants"):
            compare_table(fast_exp(case=mission_file), ["full"])

    def test_compare_rows(self, mission_file):
        rows = compare_table(fast_exp(case=mission_file), ["full", "exhaustive"])
        assert [r["variant"] for r in rows] == ["full", "exhaustive"]
        assert all(r["case"] == mission_file for r in rows)
        assert math.isnan(rows[1]["median_rmse"])

    def test_sweep_single_robot_degenerate(self, mission_file):
        rows = sweep_table(fast_exp(case=mission_file), [1])
        assert rows[0]["m"] == 1
        assert rows[0]["n_seeds"] == 1

    def test_sweep_requires_ascending(self, mission_file):
        with pytest.raises(ConfigError, match="ascending"):
            sweep_table(fast_exp(case=mission_file), [5, 2])


class TestCli:
    def test_missing_field_file_exits_2(self, capsys, tmp_path):
        rc = main(["run", "--case", str(tmp_path / "ghost.json"), "--seeds", "0"])
        assert rc == 2
        assert "ghost.json" in capsys.readouterr().err

    def test_single_variant_compare_exits_2(self, mission_file):
        rc = main(["compare", "--case", mission_file, "--variants", "full", "--seeds", "0"])
        assert rc == 2

    def test_run_writes_artifacts(self, mission_file, tmp_path, capsys):
        out = tmp_path / "runs"
        rc = main([
            "run", "--case", mission_file, "--m", "2", "--seeds", "0",
            "--output", str(out),
        ])
        assert rc == 0
        records = list(out.glob("*/run_record.json"))
        assert len(records) == 1
        run_dir = records[0].parent
        assert (run_dir / "meta.json").exists()
        assert (run_dir / "seed0000" / "events.jsonl").exists()
        traj = (run_dir / "seed0000" / "trajectories.csv").read_text().splitlines()
        assert traj[0] == "t,robot,x,y,value"
        assert len(traj) > 10

    def test_run_twice_identical_records(self, mission_file, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            rc = main(["run", "--case", mission_file, "--m", "2", "--seeds", "0",
                       "--output", str(out)])
            assert rc == 0
        r1 = next(out1.glob("*/run_record.json")).read_text()
        r2 = next(out2.glob("*/run_record.json")).read_text()
        assert r1 == r2
        e1 = next(out1.glob("*/seed0000/events.jsonl")).read_bytes()
        e2 = next(out2.glob("*/seed0000/events.jsonl")).read_bytes()
        assert e1 == e2

    def test_unknown_config_field_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "exp.json"
        cfg.write_text(json.dumps({"m": 2, "bogus_knob": 1}))
        rc = main(["run", "--config", str(cfg)])
        assert rc == 2
        assert "bogus_knob" in capsys.readouterr().err

    def test_baseline_verb(self, mission_file, tmp_path):
        rc = main(["baseline", "--case", mission_file, "--output", str(tmp_path / "b")])
        assert rc == 0

    def test_sweep_verb(self, mission_file, tmp_path, capsys):
        rc = main([
            "sweep", "--case", mission_file, "--m-list", "1,2", "--seeds", "0",
            "--output", str(tmp_path / "s"),
        ])
        assert rc == 0
        csv_files = list((tmp_path / "s").glob("sweep_*.csv"))
        assert len(csv_files) == 1
        header = csv_files[0].read_text().splitlines()[0]
        assert header.split(",")[:4] == ["case", "m", "median_tau", "median_rmse"]
