"""Figure rendering for the report-producing commands.

Every figure goes to a file next to the textual output; nothing opens a
window.  The matplotlib Agg backend is forced before pyplot is touched so
the CLI works on headless machines.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

import numpy as np  # noqa: E402

# cell codes used by the trace grid
TRACE_EMPTY = 0
TRACE_SWAP_DIGIT = 1
TRACE_TURN_DIGIT = 2
TRACE_DATA = 3
TRACE_FIRE = 4

_TRACE_COLORS = ListedColormap(
    ["#f7f7f7", "#74add1", "#fdae61", "#66bd63", "#d73027"]
)


def render_trace(grid: np.ndarray, path: str | Path, ring_size: int) -> Path:
    """Space-time diagram: one row per step, one column per cell."""
    grid = np.asarray(grid)
    steps, cells = grid.shape
    fig, ax = plt.subplots(
        figsize=(max(4.0, cells * 0.22), max(3.0, steps * 0.08))
    )
    ax.imshow(
        grid,
        aspect="auto",
        interpolation="nearest",
        cmap=_TRACE_COLORS,
        vmin=0,
        vmax=4,
    )
    ax.set_xlabel(f"ring cell (0..{ring_size - 1})")
    ax.set_ylabel("step")
    ax.set_title("program band sliding over the data band")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def render_scaling(
    time_points: Sequence[tuple[int, int]],
    space_points: Sequence[tuple[int, int]],
    path: str | Path,
) -> Path:
    """Resource scaling: steps vs gate count, program length vs separation."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    if time_points:
        xs, ys = zip(*time_points)
        ax1.plot(xs, ys, "o-", color="#4575b4")
        c = sum(x * y for x, y in time_points) / sum(x * x for x, _ in time_points)
        ax1.plot(xs, [c * x for x in xs], "--", color="#999999", label=f"{c:.0f} per gate")
        ax1.legend(frameon=False)
    ax1.set_xlabel("gate count")
    ax1.set_ylabel("machine steps")
    ax1.set_title("time scaling")
    if space_points:
        xs, ys = zip(*space_points)
        ax2.plot(xs, ys, "s-", color="#d73027")
    ax2.set_xlabel("wire separation")
    ax2.set_ylabel("layers per gate")
    ax2.set_title("space scaling")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path
