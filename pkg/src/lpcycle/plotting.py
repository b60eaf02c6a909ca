"""Matplotlib renderings of sweep grids and run trajectories.

Figures are written with a fixed SVG hash salt and no date metadata so
that identical inputs give byte-identical files.
"""

from __future__ import annotations

import io
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .engine import OutcomeKind, RunReport  # noqa: E402

NEITHER, DANTZIG_ONLY, BOTH = 0, 1, 2
_REGION_COLORS = ListedColormap(["0.55", "0.82", "white"])
_METADATA = {"svg": {"Date": None}, "pdf": {"CreationDate": None}, "png": {}}


def _save(fig, target, fmt: str) -> None:
    with plt.rc_context({"svg.hashsalt": "lpcycle", "svg.fonttype": "path"}):
        fig.savefig(target, format=fmt, metadata=_METADATA.get(fmt, {}), bbox_inches="tight")
    plt.close(fig)


def _region_codes(grid) -> np.ndarray:
    codes = np.full((grid.a12_range.steps, grid.a11_range.steps), NEITHER)
    for i, row in enumerate(grid.cells):
        for j, c in enumerate(row):
            if c.sim_expand is OutcomeKind.CYCLES and c.sim_dantzig is OutcomeKind.CYCLES:
                codes[j, i] = BOTH
            elif c.sim_dantzig is OutcomeKind.CYCLES:
                codes[j, i] = DANTZIG_ONLY
    return codes


def region_figure(grid):
    """Cells colored by simulated outcome, analytic region boundaries on top.

    White cells cycle under both ratio tests, light grey only under the
    standard one; dark grey cells do not cycle.
    """
    r11, r12 = grid.a11_range, grid.a12_range
    lo11, hi11, lo12, hi12 = float(r11.lo), float(r11.hi), float(r12.lo), float(r12.hi)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if r11.steps and r12.steps:
        ax.pcolormesh(
            np.linspace(lo11, hi11, r11.steps + 1),
            np.linspace(lo12, hi12, r12.steps + 1),
            _region_codes(grid),
            cmap=_REGION_COLORS,
            vmin=NEITHER,
            vmax=BOTH,
            shading="flat",
        )
        xs = np.linspace(max(lo11, 1e-9), hi11, 200)
        ax.plot(xs, xs * (xs + 1) / (xs + 2), color="k", lw=1.2, label=r"$A_{12} = A_{11}(A_{11}+1)/(A_{11}+2)$")
        if lo11 <= 0.5 <= hi11:
            ax.axvline(0.5, color="k", ls="--", lw=1.0, label=r"$A_{11} = 1/2$")
        handles = ax.get_legend_handles_labels()[0] + [
            Patch(facecolor="white", edgecolor="k", label="cycles (standard and EXPAND)"),
            Patch(facecolor="0.82", edgecolor="k", label="cycles (standard only)"),
            Patch(facecolor="0.55", edgecolor="k", label="no cycle"),
        ]
        ax.legend(handles=handles, fontsize="small", loc="upper left")
    ax.set_xlim(lo11, hi11 if hi11 > lo11 else lo11 + 1)
    ax.set_ylim(lo12, hi12 if hi12 > lo12 else lo12 + 1)
    ax.set_xlabel(r"$A_{11}$")
    ax.set_ylabel(r"$A_{12}$")
    ax.set_title(f"2/6-cycle region, mu rule {grid.mu_rule}")
    return fig


def region_figure_svg(grid) -> str:
    buf = io.StringIO()
    _save(region_figure(grid), buf, "svg")
    return buf.getvalue()


def save_region_figure(grid, path) -> None:
    path = pathlib.Path(path)
    _save(region_figure(grid), path, path.suffix.lstrip(".") or "png")


def trajectory_figure(report: RunReport):
    """Variable values at the start of each iteration."""
    values = [[float(v) for v in r.values] for r in report.records]
    values.append([float(v) for v in report.final_values])
    data = np.array(values)
    fig, ax = plt.subplots(figsize=(7, 4))
    n = np.arange(1, len(values) + 1)
    for j in range(data.shape[1]):
        ax.plot(n, data[:, j], lw=1.0, label=f"x{j + 1}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("value at start of iteration")
    ax.set_title(str(report.outcome))
    ax.legend(fontsize="small", ncol=2)
    return fig


def save_trajectory_figure(report: RunReport, path) -> None:
    path = pathlib.Path(path)
    _save(trajectory_figure(report), path, path.suffix.lstrip(".") or "png")
