"""Line plots and diverging heatmaps from banditab experiment CSVs.

The inputs are the simulator's two CSV shapes. Curve files carry
cumulative-regret rows per (algorithm slot, mode, timestep); grid files
carry one row per parameter pair with a slot-1-minus-slot-2 regret
difference and the probability that slot 1 performed worse. Rendering is
a pure function of file content and the figure spec: red always means
slot 1 is worse, blue means slot 1 is better, and the colormap is
centered so that a zero difference (or probability one half) is neutral.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib import colormaps
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

CURVE_COLUMNS = [
    "experiment_id", "mode", "algo_slot", "policy_kind",
    "alpha", "C", "m", "gamma", "t", "mean_regret", "se", "reps",
]
GRID_VALUE_COLUMNS = ["mean_diff", "se", "prob_correct", "prob_se", "reps"]

COLORMAP = "RdBu_r"  # low = blue (slot 1 better), high = red (slot 1 worse)
FIGSIZE_LINES = (7.0, 4.5)
FIGSIZE_HEATMAP = (5.6, 4.8)


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSV, figure kind, value column, output path."""

    csv_path: str
    kind: str  # "lines" | "heatmap"
    out_path: str | None = None
    value_column: str = "mean_diff"  # heatmaps: "mean_diff" or "prob_correct"
    title: str | None = None


class PlotInputError(ValueError):
    """The input CSV does not satisfy the expected schema."""


def read_rows(path) -> tuple[list[str], list[dict]]:
    """Read a CSV, skipping '#' metadata comment lines."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    if not lines:
        raise PlotInputError(f"{path}: empty file")
    reader = csv.reader(lines)
    header = next(reader)
    return header, [dict(zip(header, row)) for row in reader]


def _require_columns(header, needed, path) -> None:
    missing = [c for c in needed if c not in header]
    if missing:
        raise PlotInputError(f"{path}: missing column(s) {missing}")


def diverging_colors(values, center: float) -> np.ndarray:
    """RGBA per value on a diverging map centered at ``center``.

    The span is symmetric around the center, so the red side is exactly
    the set of values above it; an all-center input renders uniformly
    neutral.
    """
    values = np.asarray(values, dtype=float)
    span = float(np.max(np.abs(values - center))) if len(values) else 0.0
    cmap = colormaps[COLORMAP]
    if span == 0.0:
        return cmap(np.full(values.shape, 0.5))
    return cmap(0.5 + (values - center) / (2.0 * span))


def _save(fig: Figure, spec: FigureSpec) -> None:
    if spec.out_path:
        out = Path(spec.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)


def render_lines(spec: FigureSpec) -> Figure:
    """One errorbar curve per (algorithm slot, run mode)."""
    header, rows = read_rows(spec.csv_path)
    _require_columns(header, ["algo_slot", "mode", "policy_kind", "t", "mean_regret", "se"], spec.csv_path)
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["algo_slot"], row["mode"], row["policy_kind"]), []).append(row)

    fig = Figure(figsize=FIGSIZE_LINES)
    ax = fig.subplots()
    for (slot, mode, kind), grp in sorted(groups.items()):
        grp.sort(key=lambda r: int(r["t"]))
        t = np.array([int(r["t"]) for r in grp])
        y = np.array([float(r["mean_regret"]) for r in grp])
        err = np.array([float(r["se"]) for r in grp])
        ax.errorbar(t, y, yerr=err, label=f"{kind} (slot {slot}, {mode})", capsize=2)
    ax.set_xlabel("timestep")
    ax.set_ylabel("mean cumulative regret")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    _save(fig, spec)
    return fig


def _grid_axes(header) -> tuple[str, str]:
    for k1, k2 in (("alpha1", "alpha2"), ("gamma1", "gamma2")):
        if k1 in header and k2 in header:
            return k1, k2
    raise PlotInputError("no grid axes found (expected alpha1/alpha2 or gamma1/gamma2)")


def heatmap_grid(spec: FigureSpec):
    """Parse and validate a complete grid; returns (k1, k2, v1s, v2s, matrix)."""
    header, rows = read_rows(spec.csv_path)
    k1, k2 = _grid_axes(header)
    _require_columns(header, [spec.value_column], spec.csv_path)
    cells = {(float(r[k1]), float(r[k2])): float(r[spec.value_column]) for r in rows}
    v1s = sorted({p[0] for p in cells})
    v2s = sorted({p[1] for p in cells})
    missing = [(a, b) for a in v1s for b in v2s if (a, b) not in cells]
    if missing:
        raise PlotInputError(f"{spec.csv_path}: incomplete grid, missing cells {missing}")
    matrix = np.array([[cells[(a, b)] for b in v2s] for a in v1s])
    return k1, k2, v1s, v2s, matrix


def render_heatmap(spec: FigureSpec) -> Figure:
    """Diverging heatmap of slot-1-vs-slot-2 comparisons.

    Axis 1 (rows, the y axis) is the slot-1 parameter; red cells mean
    slot 1 came out worse. Differences are centered at 0, probabilities
    at one half.
    """
    k1, k2, v1s, v2s, matrix = heatmap_grid(spec)
    center = 0.5 if spec.value_column.startswith("prob") else 0.0
    colors = diverging_colors(matrix.ravel(), center).reshape(len(v1s), len(v2s), 4)

    fig = Figure(figsize=FIGSIZE_HEATMAP)
    ax = fig.subplots()
    for i in range(len(v1s)):
        for j in range(len(v2s)):
            ax.add_patch(Rectangle((j, i), 1.0, 1.0, facecolor=colors[i, j], edgecolor="white"))
            ax.text(
                j + 0.5, i + 0.5, f"{matrix[i, j]:.2f}",
                ha="center", va="center", fontsize=8,
            )
    ax.set_xlim(0, len(v2s))
    ax.set_ylim(0, len(v1s))
    ax.set_xticks([j + 0.5 for j in range(len(v2s))], [f"{v:g}" for v in v2s])
    ax.set_yticks([i + 0.5 for i in range(len(v1s))], [f"{v:g}" for v in v1s])
    ax.set_xlabel(k2)
    ax.set_ylabel(k1)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    _save(fig, spec)
    return fig
