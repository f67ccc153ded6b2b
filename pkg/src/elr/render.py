"""Matplotlib figures for drawings and optimizer runs.

Figures are written with fixed metadata and a fixed SVG hash salt so that the
same input always produces the same bytes.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from .leveling import LevelDrawing, StraightLineDrawing, realize_weak  # noqa: E402

plt.rcParams.update({"svg.hashsalt": "elr", "font.size": 8, "axes.spines.top": False, "axes.spines.right": False})

_METADATA = {
    ".svg": {"Date": None, "Creator": None},
    ".pdf": {"CreationDate": None, "Creator": None, "Producer": None},
    ".png": {"Software": None},
}


def _save(fig: plt.Figure, path: str | Path) -> None:
    path = Path(path)
    fig.savefig(path, metadata=_METADATA.get(path.suffix.lower()), bbox_inches="tight")
    plt.close(fig)


def _plot_geometry(
    ax: plt.Axes, coords: Mapping[int, tuple[float, float]], edges: Sequence[tuple[int, int]], labels: bool
) -> None:
    segs = [(coords[u], coords[v]) for u, v in edges]
    ax.add_collection(LineCollection(segs, colors="0.25", linewidths=0.8, zorder=1))
    xs = [p[0] for p in coords.values()]
    ys = [p[1] for p in coords.values()]
    ax.scatter(xs, ys, s=14, c="tab:blue", zorder=2, linewidths=0)
    if labels:
        for v, (x, y) in coords.items():
            ax.annotate(str(v), (x, y), xytext=(2, 2), textcoords="offset points", fontsize=6)
    ax.set_aspect("auto")
    ax.autoscale_view()


def plot_level_drawing(d: LevelDrawing, path: str | Path, *, width: float = 8.0, labels: bool = True, title: str | None = None) -> None:
    """Levels as horizontal guide lines, vertices as labeled dots."""
    sd = realize_weak(d)
    levels = sorted(d.order)
    span_x = max((float(x) for x, _ in sd.coords.values()), default=1.0) or 1.0
    scale = width / span_x
    coords = {v: (float(x) * scale, float(y)) for v, (x, y) in sd.coords.items()}
    fig, ax = plt.subplots(figsize=(width + 1, max(2.0, 0.6 * len(levels) + 1)))
    for L in levels:
        ax.axhline(-L, color="0.85", linewidth=0.6, zorder=0)
    _plot_geometry(ax, coords, sorted(d.edges), labels)
    ax.set_yticks([-L for L in levels], [str(L) for L in levels])
    ax.set_ylabel("level")
    ax.set_xticks([])
    ax.set_title(title or f"{len(d.vertices)} vertices on {len(levels)} levels")
    _save(fig, path)


def plot_straight_line(d: StraightLineDrawing, path: str | Path, *, labels: bool = True, title: str | None = None) -> None:
    coords = {v: (float(x), float(y)) for v, (x, y) in d.coords.items()}
    fig, ax = plt.subplots(figsize=(6, 6))
    _plot_geometry(ax, coords, sorted(d.edges), labels)
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_span_histogram(hist: Mapping[int, int], path: str | Path, title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=(4, 3))
    keys = sorted(hist)
    ax.bar([str(k) for k in keys], [hist[k] for k in keys], color="tab:blue")
    ax.set_xlabel("span")
    ax.set_ylabel("edges")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_restarts(values: Sequence[float], bound: float, path: str | Path, title: str | None = None) -> None:
    """Best local ratio of each restart against the proven lower bound."""
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.plot(range(len(values)), values, "o", ms=3, color="tab:blue", label="best per restart")
    ax.axhline(bound, color="tab:red", linestyle="--", linewidth=1, label=f"lower bound {bound:.3g}")
    ax.set_xlabel("restart")
    ax.set_ylabel(r"$\rho_\ell$")
    ax.set_ylim(bottom=0)
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    _save(fig, path)
