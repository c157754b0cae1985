import json
import os
import subprocess
import sys
import time

import pytest

from isacsim.cli import RunSpec, build_parser, main_run
from isacsim.configio import ConfigError, parse_config

FAST_BODY = """
# scaled-down scenario for test speed
resident_mean_count = 8
uav_mean_count = 4
rounds = 40
"""


def write_config(tmp_path, body, name="run.cfg"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.setdefault("ISAC_SIM_LOG", "error")
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "isacsim.cli", *args],
                          capture_output=True, text=True, env=env)


class TestParseConfig:
    def test_empty_gives_paper_defaults(self, tmp_path):
        parsed = parse_config(write_config(tmp_path, "\n"))
        cfg = parsed.scenario
        assert cfg.region.radius == 1500.0
        assert cfg.bs_height == 50.0
        assert cfg.uav_mean_count == 14.0
        assert cfg.uav_capacity == 2e7
        assert cfg.comm.carrier_frequency == 2e9
        assert parsed.provided_keys == set()

    def test_no_file_means_defaults(self):
        parsed = parse_config(None)
        assert parsed.scenario.uav_mean_count == 14.0

    def test_unknown_key_named(self, tmp_path):
        path = write_config(tmp_path, "uav_hieght = 120\n")
        with pytest.raises(ConfigError, match="uav_hieght"):
            parse_config(path)

    def test_hole_invariant_named(self, tmp_path):
        path = write_config(tmp_path, "hole_radius_m = 2000\n")
        with pytest.raises(ConfigError, match="hole_radius.*region.radius"):
            parse_config(path)

    def test_line_number_in_parse_error(self, tmp_path):
        path = write_config(tmp_path, "rounds = ten\n")
        with pytest.raises(ConfigError, match=":1"):
            parse_config(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = write_config(tmp_path, "rounds = 10\nrounds = 20\n")
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(path)

    def test_comments_and_units(self, tmp_path):
        body = """
        bs_tx_power_dbm = 43  # stronger macro cell
        sweep_betas_per_m = 1e-3, 2e-3
        """
        parsed = parse_config(write_config(tmp_path, body))
        assert parsed.scenario.bs_tx_power == pytest.approx(10 ** 4.3 * 1e-3)
        assert parsed.grid.betas == (1e-3, 2e-3)

    def test_provenance_tracked(self, tmp_path):
        parsed = parse_config(write_config(tmp_path, "master_seed = 9\n"))
        assert parsed.provided_keys == {"master_seed"}
        from isacsim.configio import manifest_values

        values = manifest_values(parsed)
        assert values["master_seed"]["source"] == "file"
        assert values["region_radius_m"]["source"] == "default"
        assert values["region_radius_m"]["paper_anchored_default"]
        assert not values["bs_tx_power_dbm"]["paper_anchored_default"]

    def test_non_integer_rejected(self, tmp_path):
        path = write_config(tmp_path, "rounds = 10.5\n")
        with pytest.raises(ConfigError, match="rounds"):
            parse_config(path)


class TestRunSpec:
    def test_mode_validated(self):
        with pytest.raises(ValueError):
            RunSpec(mode="replay", config_path=None, output_dir="out")

    def test_parser_roundtrip(self):
        args = build_parser().parse_args(
            ["--mode", "sweep", "--seed", "5", "--rounds", "10",
             "--parallelism", "2", "--out", "x"])
        assert args.mode == "sweep" and args.seed == 5


class TestMainRun:
    def test_missing_config_exits_1(self, tmp_path):
        spec = RunSpec(mode="single", config_path=str(tmp_path / "nope.cfg"),
                       output_dir=str(tmp_path / "out"))
        assert main_run(spec) == 1

    def test_bad_config_exits_1(self, tmp_path):
        path = write_config(tmp_path, "hole_radius_m = 9999\n")
        spec = RunSpec(mode="single", config_path=path,
                       output_dir=str(tmp_path / "out"))
        assert main_run(spec) == 1

    def test_single_run_writes_outputs(self, tmp_path):
        path = write_config(tmp_path, FAST_BODY)
        out = tmp_path / "out"
        spec = RunSpec(mode="single", config_path=path, output_dir=str(out))
        assert main_run(spec) == 0
        rows = open(out / "results.csv").read().splitlines()
        assert len(rows) == 2  # header + one cell
        manifest = json.loads(open(out / "manifest.json").read())
        assert manifest["mode"] == "single"
        assert manifest["tau_source"] == "config"
        assert manifest["config"]["uav_mean_count"]["value"] == 4

    def test_unreachable_calibration_exits_2(self, tmp_path):
        body = FAST_BODY + "calibration_target_pfa = 1e-9\ncalibration_rounds = 50\n"
        path = write_config(tmp_path, body)
        spec = RunSpec(mode="calibrate", config_path=path,
                       output_dir=str(tmp_path / "out"))
        assert main_run(spec) == 2

    def test_calibrate_mode(self, tmp_path):
        body = FAST_BODY + "calibration_rounds = 300\n"
        path = write_config(tmp_path, body)
        out = tmp_path / "out"
        spec = RunSpec(mode="calibrate", config_path=path, output_dir=str(out))
        assert main_run(spec) == 0
        manifest = json.loads(open(out / "manifest.json").read())
        assert manifest["tau_w"] > 0


class TestCliProcess:
    def test_seed_reproducibility(self, tmp_path):
        path = write_config(tmp_path, FAST_BODY)
        for name in ("a", "b"):
            res = run_cli(["--config", path, "--mode", "single", "--seed", "7",
                           "--rounds", "30", "--out", str(tmp_path / name)])
            assert res.returncode == 0, res.stderr
        assert (tmp_path / "a" / "results.csv").read_bytes() \
            == (tmp_path / "b" / "results.csv").read_bytes()

    def test_runtime_budget(self, tmp_path):
        # 100 rounds at the full default scale must finish within 10 s
        start = time.monotonic()
        res = run_cli(["--mode", "single", "--rounds", "100",
                       "--out", str(tmp_path / "out")])
        elapsed = time.monotonic() - start
        assert res.returncode == 0, res.stderr
        assert elapsed < 10.0

    def test_log_env_accepted(self, tmp_path):
        res = run_cli(["--config", write_config(tmp_path, FAST_BODY),
                       "--mode", "single", "--rounds", "5",
                       "--out", str(tmp_path / "out")],
                      env_extra={"ISAC_SIM_LOG": "debug"})
        assert res.returncode == 0
        assert "running" in res.stderr

    def test_missing_config_process_exit(self, tmp_path):
        res = run_cli(["--config", str(tmp_path / "absent.cfg"),
                       "--out", str(tmp_path / "out")])
        assert res.returncode == 1
