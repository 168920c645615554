"""Static SVG figures of sweep tables.

Solid line: DPP approximation. Dashed line: Poisson-saddlepoint
approximation. When Monte-Carlo columns are present each grid value gets
a small box from the first to the third quartile with a median tick.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .experiments import SweepTable  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "pipp-approx",
    "svg.fonttype": "none",
}

BOX_WIDTH = 0.02


def plot_sweep(ax, table: SweepTable, title: str | None = None) -> int:
    """Draw one sweep on ``ax``; returns the number of boxplot glyphs."""
    g1 = table.column("gamma1")
    ax.plot(g1, table.column("lambda_dpp"), "-", color="k", label="DPP")
    ax.plot(g1, table.column("lambda_ps"), "--", color="k", label="Poisson-saddlepoint")
    n_boxes = 0
    if table.has_mc:
        for i, row in enumerate(table.rows):
            x, q1, med, q3 = row["gamma1"], row["mc_q1"], row["mc_median"], row["mc_q3"]
            box = Rectangle((x - BOX_WIDTH / 2, q1), BOX_WIDTH, q3 - q1, fill=False,
                            edgecolor="tab:blue", linewidth=0.8)
            box.set_gid(f"mc-box-{i}")
            ax.add_patch(box)
            (tick,) = ax.plot([x - BOX_WIDTH / 2, x + BOX_WIDTH / 2], [med, med],
                              color="tab:blue", linewidth=1.0)
            tick.set_gid(f"mc-median-{i}")
            n_boxes += 1
        ax.plot([], [], "s", mfc="none", mec="tab:blue", label="Monte Carlo")
    ax.set_xlim(-0.03, 1.03)
    ax.set_xlabel(r"$\gamma_1$")
    ax.set_ylabel("intensity")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, loc="upper left")
    return n_boxes


def render_figure(tables: Sequence[SweepTable], out_path, titles: Sequence[str] | None = None):
    """Write side-by-side panels, one per table, to ``out_path`` (SVG)."""
    if not tables:
        raise ValueError("need at least one table")
    titles = list(titles) if titles is not None else [None] * len(tables)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(tables), figsize=(3.6 * len(tables), 3.0), squeeze=False)
        for ax, table, title in zip(axes[0], tables, titles):
            plot_sweep(ax, table, title)
        fig.tight_layout()
        tmp = out_path.with_name(out_path.name + ".tmp")
        fig.savefig(tmp, format="svg", metadata={"Date": None})
        plt.close(fig)
    os.replace(tmp, out_path)
    return out_path
