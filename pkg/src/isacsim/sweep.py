"""Parameter sweeps over (UAV height, hole radius, non-homogeneity).

Every cell re-derives its UAV density so the expected count stays at the
configured mean, and draws its rounds from streams keyed by the cell
coordinates: permuting the grid or re-running one cell standalone yields
identical numbers.  The detection threshold is held fixed across the whole
sweep so the sensing metrics respond to geometry, not to re-calibration.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .mcengine import (
    MetricEstimate,
    RunResult,
    average_sensing_probability,
    coverage_probability,
    detection_probability,
    false_alarm_probability,
    run_many,
    throughput,
)
from .scenario import ScenarioConfig
from .version import __version__ as _version

log = logging.getLogger("isacsim.sweep")

CSV_HEADER = ("height_m,hole_radius_m,beta_per_m,"
              "coverage,coverage_lo,coverage_hi,"
              "throughput_bps,throughput_lo,throughput_hi,"
              "pd,pd_lo,pd_hi,pfa,pfa_lo,pfa_hi,asp,asp_lo,asp_hi,rounds,seed")

METRIC_NAMES = ("coverage", "throughput", "pd", "pfa", "asp")


@dataclass(frozen=True)
class SweepGrid:
    heights: Tuple[float, ...]
    hole_radii: Tuple[float, ...]
    betas: Tuple[float, ...]
    rounds_per_cell: int = 10000

    def __post_init__(self):
        if not (self.heights and self.hole_radii and self.betas):
            raise ValueError("sweep grid axes must be nonempty")
        if self.rounds_per_cell <= 0:
            raise ValueError("rounds_per_cell must be positive")

    @property
    def n_cells(self) -> int:
        return len(self.heights) * len(self.hole_radii) * len(self.betas)

    def cells(self):
        for h in self.heights:
            for r in self.hole_radii:
                for b in self.betas:
                    yield (h, r, b)


@dataclass
class CellResult:
    height: float
    hole_radius: float
    beta: float
    estimates: Dict[str, MetricEstimate]
    rounds: int
    seed: int

    @property
    def coords(self) -> Tuple[float, float, float]:
        return (self.height, self.hole_radius, self.beta)


@dataclass
class SweepResult:
    grid: SweepGrid
    base_config: ScenarioConfig
    tau: float
    rows: List[CellResult] = field(default_factory=list)
    errors: List[Tuple[Tuple[float, float, float], str]] = field(default_factory=list)
    raw: Dict[Tuple[float, float, float], RunResult] = field(default_factory=dict)
    wall_time_s: float = 0.0


def estimate_cell_metrics(run: RunResult, tau: float) -> Dict[str, MetricEstimate]:
    pd = detection_probability(run, tau)
    pfa = false_alarm_probability(run, tau)
    return {
        "coverage": coverage_probability(run),
        "throughput": throughput(run),
        "pd": pd,
        "pfa": pfa,
        "asp": average_sensing_probability(pd, pfa, run, tau),
    }


def run_sweep(grid: SweepGrid, base_config: ScenarioConfig,
              tau: Optional[float] = None, parallelism: int = 1,
              keep_raw: bool = False) -> SweepResult:
    """Run every grid cell; degenerate cells are reported, not fatal."""
    t0 = time.monotonic()
    if tau is None:
        tau = base_config.sensing.detection_threshold
    result = SweepResult(grid=grid, base_config=base_config, tau=tau)
    for idx, (h, r, b) in enumerate(grid.cells()):
        try:
            cfg = base_config.with_cell(h, r, b)
        except ValueError as exc:
            log.warning("skipping degenerate cell (h=%g, hole=%g, beta=%g): %s",
                        h, r, b, exc)
            result.errors.append(((h, r, b), str(exc)))
            continue
        run = run_many(cfg, grid.rounds_per_cell, parallelism)
        result.rows.append(CellResult(
            height=h, hole_radius=r, beta=b,
            estimates=estimate_cell_metrics(run, tau),
            rounds=grid.rounds_per_cell, seed=base_config.master_seed))
        if keep_raw:
            result.raw[(h, r, b)] = run
        log.info("cell %d/%d done (h=%g, hole=%g, beta=%g)",
                 idx + 1, grid.n_cells, h, r, b)
    result.wall_time_s = time.monotonic() - t0
    return result


def argmax_cell(result: SweepResult, metric_name: str):
    """Cell with the maximal estimate; ties go to the smallest coordinates."""
    if metric_name not in METRIC_NAMES:
        raise ValueError(f"unknown metric {metric_name!r}; "
                         f"expected one of {METRIC_NAMES}")
    if not result.rows:
        raise ValueError("empty sweep result")
    best = None
    for row in sorted(result.rows, key=lambda r: r.coords):
        value = row.estimates[metric_name].mean
        if best is None or value > best[1]:
            best = (row.coords, value)
    return best


def _fmt(x) -> str:
    return repr(float(x))


def row_to_csv(row: CellResult) -> str:
    e = row.estimates
    fields = [_fmt(row.height), _fmt(row.hole_radius), _fmt(row.beta)]
    for name in METRIC_NAMES:
        est = e[name]
        fields += [_fmt(est.mean), _fmt(est.ci95_low), _fmt(est.ci95_high)]
    fields += [str(row.rounds), str(row.seed)]
    return ",".join(fields)


def emit_results(result: SweepResult, out_dir, manifest_extra: Optional[dict] = None):
    """Write results.csv (documented schema) and a reproducibility manifest."""
    import os

    csv_path = os.path.join(out_dir, "results.csv")
    manifest_path = os.path.join(out_dir, "manifest.json")
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in result.rows:
                fh.write(row_to_csv(row) + "\n")
        manifest = {
            "version": _version,
            "master_seed": result.base_config.master_seed,
            "tau_w": result.tau,
            "grid": {
                "heights_m": list(result.grid.heights),
                "hole_radii_m": list(result.grid.hole_radii),
                "betas_per_m": list(result.grid.betas),
                "rounds_per_cell": result.grid.rounds_per_cell,
            },
            "cell_errors": [{"cell": list(c), "error": msg}
                            for c, msg in result.errors],
            "wall_time_s": result.wall_time_s,
        }
        if manifest_extra:
            manifest.update(manifest_extra)
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write results under {out_dir!r}: {exc}") from exc
    return csv_path, manifest_path


def read_results_csv(path):
    """Read back an emitted CSV as a list of per-row dicts (floats)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path!r}")
        names = header.split(",")
        rows = []
        for line in fh:
            if not line.strip():
                continue
            rows.append({n: float(v) for n, v in zip(names, line.split(","))})
    return rows
