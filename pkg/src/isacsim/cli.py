"""Command-line entry point.

Modes:
  single     run the configured scenario and emit a one-row results CSV
  sweep      run the configured parameter grid (calibrating the detection
             threshold at the base config unless the file pins one)
  calibrate  only calibrate the detection threshold and report it

Exit codes: 0 success, 1 configuration error, 2 runtime error.  Progress
goes to stderr; ISAC_SIM_LOG={error,info,debug} sets the verbosity.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .channel import watts_to_dbm
from .configio import ConfigError, manifest_values, parse_config
from .version import __version__
from .kernels import backend_name
from .mcengine import CalibrationError, calibrate_threshold
from .sweep import SweepGrid, emit_results, run_sweep

log = logging.getLogger("isacsim")

MODES = ("single", "sweep", "calibrate")


@dataclass
class RunSpec:
    mode: str
    config_path: Optional[str]
    output_dir: str
    seed_override: Optional[int] = None
    rounds_override: Optional[int] = None
    parallelism: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not self.output_dir:
            raise ValueError("output directory must be nonempty")


def _setup_logging():
    level_name = os.environ.get("ISAC_SIM_LOG", "info").lower()
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(level_name, logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isacsim",
        description="Monte Carlo simulator for sensing-assisted UAV/BS networks")
    parser.add_argument("--config", default=None,
                        help="key-value config file (defaults apply when omitted)")
    parser.add_argument("--mode", choices=MODES, default="single")
    parser.add_argument("--out", default="isacsim-out", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--rounds", type=int, default=None,
                        help="rounds (single) / rounds per cell (sweep) override")
    parser.add_argument("--parallelism", type=int, default=None,
                        help="worker processes for round execution")
    return parser


def main_run(spec: RunSpec) -> int:
    """Execute one run spec; returns the process exit code."""
    t0 = time.monotonic()
    try:
        if spec.config_path is not None and not os.path.exists(spec.config_path):
            raise ConfigError(f"config file not found: {spec.config_path}")
        parsed = parse_config(spec.config_path)
        config = parsed.scenario
        if spec.seed_override is not None:
            config = dataclasses.replace(config, master_seed=spec.seed_override)
        parallelism = spec.parallelism or parsed.run.parallelism
    except (ConfigError, ValueError) as exc:
        log.error("configuration error: %s", exc)
        return 1

    try:
        manifest = {
            "mode": spec.mode,
            "version": __version__,
            "backend": backend_name(),
            "config": manifest_values(parsed),
            "master_seed": config.master_seed,
            "parallelism": parallelism,
            "output_dir": os.path.abspath(spec.output_dir),
        }

        if spec.mode == "calibrate":
            tau = calibrate_threshold(config, parsed.run.calibration_target_pfa,
                                      parsed.run.calibration_rounds,
                                      parallelism=parallelism)
            manifest["tau_w"] = tau
            manifest["tau_dbm"] = float(watts_to_dbm(tau)) if tau > 0 else None
            manifest["wall_time_s"] = time.monotonic() - t0
            os.makedirs(spec.output_dir, exist_ok=True)
            path = os.path.join(spec.output_dir, "manifest.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(manifest, fh, indent=2, sort_keys=True)
                fh.write("\n")
            print(f"calibrated detection threshold: {tau:.6e} W")
            log.info("manifest written to %s", path)
            return 0

        if spec.mode == "single":
            rounds = spec.rounds_override or parsed.run.rounds
            grid = SweepGrid(heights=(config.uav_height,),
                             hole_radii=(config.hole_radius,),
                             betas=(config.uav_beta,),
                             rounds_per_cell=rounds)
            tau = config.sensing.detection_threshold
            manifest["tau_source"] = "config"
        else:
            rounds = spec.rounds_override or parsed.run.rounds_per_cell
            grid = dataclasses.replace(parsed.grid, rounds_per_cell=rounds)
            if "detection_threshold_dbm" in parsed.provided_keys:
                tau = config.sensing.detection_threshold
                manifest["tau_source"] = "config"
            else:
                log.info("calibrating detection threshold at the base config")
                tau = calibrate_threshold(config, parsed.run.calibration_target_pfa,
                                          parsed.run.calibration_rounds,
                                          parallelism=parallelism)
                manifest["tau_source"] = "calibrated"
        manifest["tau_w"] = tau

        log.info("running %d cell(s) x %d rounds (backend: %s, parallelism: %d)",
                 grid.n_cells, grid.rounds_per_cell, backend_name(), parallelism)
        result = run_sweep(grid, config, tau=tau, parallelism=parallelism)
        manifest["wall_time_s"] = time.monotonic() - t0
        csv_path, manifest_path = emit_results(result, spec.output_dir, manifest)
        log.info("wrote %s and %s", csv_path, manifest_path)
        return 0
    except CalibrationError as exc:
        log.error("calibration failed: %s", exc)
        return 2
    except Exception as exc:  # runtime failures map to exit code 2
        log.error("run failed: %s", exc)
        if log.isEnabledFor(logging.DEBUG):
            log.exception("traceback")
        return 2


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    spec = RunSpec(mode=args.mode, config_path=args.config, output_dir=args.out,
                   seed_override=args.seed, rounds_override=args.rounds,
                   parallelism=args.parallelism)
    return main_run(spec)


if __name__ == "__main__":
    sys.exit(main())
