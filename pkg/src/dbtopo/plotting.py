"""Optional figure rendering for the CLI report paths (matplotlib, Agg)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bounds import ScanRow  # noqa: E402
from .experiments import SweepRow, aggregate_sweep  # noqa: E402
from .persistence import PersistenceDiagram  # noqa: E402

__all__ = ["render_ratio_plot", "render_sweep_plot", "render_diagram_plot"]


def render_ratio_plot(rows: list[ScanRow], path, x_label: str = "parameter") -> None:
    feasible = [r for r in rows if r.feasible]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot([r.param for r in feasible], [r.ratio for r in feasible], "o-")
    ax.set_xlabel(x_label)
    ax.set_ylabel("active / passive bound ratio")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_plot(rows: list[SweepRow], path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    medians = aggregate_sweep(rows)
    for strategy in sorted({r.strategy for r in rows}):
        points = [(f, m) for s, f, m in medians if s == strategy]
        ax.plot([p[0] for p in points], [p[1] for p in points], "o-", label=strategy)
    ax.set_xlabel("budget fraction")
    ax.set_ylabel("median bottleneck distance (dim 1)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_diagram_plot(diagram: PersistenceDiagram, path) -> None:
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    finite_max = 1.0
    for p in diagram.pairs:
        if not math.isinf(p.death):
            finite_max = max(finite_max, p.death)
        finite_max = max(finite_max, p.birth)
    cap = finite_max * 1.1
    styles = {0: ("tab:blue", "o"), 1: ("tab:red", "s")}
    for dim in (0, 1):
        pts = diagram.in_dim(dim)
        if not pts:
            continue
        color, marker = styles[dim]
        births = [p.birth for p in pts]
        deaths = [cap if math.isinf(p.death) else p.death for p in pts]
        ax.scatter(births, deaths, c=color, marker=marker, label=f"dim {dim}", alpha=0.7)
    ax.plot([0, cap], [0, cap], "k--", lw=0.8)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
