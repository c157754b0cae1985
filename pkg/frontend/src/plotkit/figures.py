"""Render publication-style figures from isacsim sweep CSVs.

Two figure kinds: metric-vs-parameter line plots with confidence bands
(one line per series value) and a heatmap of one metric over the
(hole radius x non-homogeneity) grid with the best cell annotated.
Rendering is read-only over the CSV and deterministic for a fixed style.
"""

import csv
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

# CSV columns of the documented sweep schema
PROBABILITY_METRICS = ("coverage", "pd", "pfa", "asp")
CI_COLUMNS = {
    "coverage": ("coverage_lo", "coverage_hi"),
    "throughput_bps": ("throughput_lo", "throughput_hi"),
    "pd": ("pd_lo", "pd_hi"),
    "pfa": ("pfa_lo", "pfa_hi"),
    "asp": ("asp_lo", "asp_hi"),
}


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    figure_kind: str  # "lines" | "heatmap"
    x_axis: str = "hole_radius_m"
    series_axis: str = "beta_per_m"
    metric: str = "asp"
    output_path: str = "figure.png"
    height_filter: Optional[float] = None

    def __post_init__(self):
        if self.figure_kind not in ("lines", "heatmap"):
            raise ValueError("figure_kind must be 'lines' or 'heatmap'")
        if self.metric not in CI_COLUMNS:
            raise ValueError(f"metric must be one of {sorted(CI_COLUMNS)}")


def load_results(path):
    """Read a sweep CSV into a dict of float column arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"no data rows in {path!r}")
    return {name: np.array([float(r[name]) for r in rows])
            for name in rows[0]}


def _require_columns(data, names):
    missing = [n for n in names if n not in data]
    if missing:
        raise ValueError(f"missing CSV columns: {', '.join(missing)}")


def _apply_height_filter(data, spec):
    if spec.height_filter is None:
        return data
    mask = data["height_m"] == spec.height_filter
    if not mask.any():
        raise ValueError(f"no rows at height {spec.height_filter} m")
    return {k: v[mask] for k, v in data.items()}


def render_lines(spec: FigureSpec):
    """One line per series value with 95% CI bands; returns (path, meta)."""
    data = _apply_height_filter(load_results(spec.csv_path), spec)
    lo_col, hi_col = CI_COLUMNS[spec.metric]
    _require_columns(data, [spec.x_axis, spec.series_axis, spec.metric,
                            lo_col, hi_col])

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    series_values = np.unique(data[spec.series_axis])
    for value in series_values:
        mask = data[spec.series_axis] == value
        order = np.argsort(data[spec.x_axis][mask])
        x = data[spec.x_axis][mask][order]
        y = data[spec.metric][mask][order]
        lo = data[lo_col][mask][order]
        hi = data[hi_col][mask][order]
        line, = ax.plot(x, y, marker="o", label=f"{spec.series_axis}={value:g}")
        ax.fill_between(x, lo, hi, alpha=0.2, color=line.get_color())
    ax.set_xlabel(spec.x_axis)
    ax.set_ylabel(spec.metric)
    if spec.metric in PROBABILITY_METRICS:
        ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=110)
    plt.close(fig)
    return spec.output_path, {"series": list(series_values)}


def render_heatmap(spec: FigureSpec):
    """Metric heatmap over (x_axis x series_axis) with the argmax annotated.

    The grid must be rectangular: every (x, series) pair exactly once.
    Returns (path, meta) with the argmax cell in meta.
    """
    data = _apply_height_filter(load_results(spec.csv_path), spec)
    _require_columns(data, [spec.x_axis, spec.series_axis, spec.metric])
    if spec.height_filter is None and len(np.unique(data["height_m"])) > 1:
        raise ValueError("multiple heights in CSV; pass a height filter")

    xs = np.unique(data[spec.x_axis])
    ys = np.unique(data[spec.series_axis])
    grid = np.full((len(ys), len(xs)), np.nan)
    for xv, yv, mv in zip(data[spec.x_axis], data[spec.series_axis],
                          data[spec.metric]):
        grid[np.searchsorted(ys, yv), np.searchsorted(xs, xv)] = mv
    if np.isnan(grid).any() or len(xs) * len(ys) != len(data[spec.metric]):
        raise ValueError("non-rectangular grid: every (x, series) pair must "
                         "appear exactly once")

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    bounds = (0.0, 1.0) if spec.metric in PROBABILITY_METRICS else (None, None)
    im = ax.imshow(grid, origin="lower", aspect="auto",
                   vmin=bounds[0], vmax=bounds[1], cmap="viridis")
    ax.set_xticks(range(len(xs)), [f"{v:g}" for v in xs])
    ax.set_yticks(range(len(ys)), [f"{v:g}" for v in ys])
    ax.set_xlabel(spec.x_axis)
    ax.set_ylabel(spec.series_axis)
    fig.colorbar(im, ax=ax, label=spec.metric)

    flat = int(np.argmax(grid))
    iy, ix = divmod(flat, len(xs))
    best = grid[iy, ix]
    annotation = (f"β*={ys[iy]:g} /m, h*={xs[ix]:g} m, "
                  f"{spec.metric.upper()}={best:.3f}")
    ax.plot(ix, iy, marker="*", markersize=16, color="red")
    ax.annotate(annotation, xy=(ix, iy), xytext=(0.02, 1.02),
                textcoords="axes fraction", fontsize=9, color="black")
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=110)
    plt.close(fig)
    return spec.output_path, {
        "argmax": {"x": float(xs[ix]), "series": float(ys[iy]),
                   "value": float(best)},
        "annotation": annotation,
    }


def render(spec: FigureSpec):
    if spec.figure_kind == "lines":
        return render_lines(spec)
    return render_heatmap(spec)
