"""Figures written next to the CLI's delimited reports.

PNGs are saved without a Software/date stamp so identical inputs give
identical bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .concepts import FormalConcept  # noqa: E402
from .context import FormalContext  # noqa: E402
from .evaluation import FoldReport  # noqa: E402
from .morpho import FormStats  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "svg.hashsalt": "conceptrec",
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_folds(reports: Sequence[FoldReport], path: str | Path, min_conf: float | None = None) -> Path:
    """Per-fold test confidence, all supported rules vs. rules with conf >= 0.5."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        idx = [r.fold_index + 1 for r in reports]
        width = 0.38
        ax.bar([i - width / 2 for i in idx],
               [float(r.average_conf or 0) for r in reports], width, label="average_conf")
        ax.bar([i + width / 2 for i in idx],
               [float(r.average_conf_restricted or 0) for r in reports], width,
               label="average_conf (conf >= 0.5)")
        if min_conf is not None:
            ax.axhline(min_conf, color="k", lw=0.8, ls="--", label=f"training min_conf {min_conf:g}")
        ax.set_xticks(idx)
        ax.set_xlabel("fold")
        ax.set_ylabel("test confidence")
        ax.set_ylim(0, 1.05)
        ax.legend(loc="lower right", frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_metarule_stats(stats: dict[str, FormStats], path: str | Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        forms = list(stats)
        confs = [float(stats[f].average_confidence or 0) for f in forms]
        bars = ax.bar(forms, confs, color="tab:green")
        for bar, f in zip(bars, forms):
            ax.annotate(f"n={stats[f].count}", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=7)
        ax.set_xlabel("rule form")
        ax.set_ylabel("average confidence")
        ax.set_ylim(0, 1.1)
        fig.tight_layout()
        return _save(fig, path)


def plot_band(concepts: Sequence[FormalConcept], path: str | Path) -> Path:
    """Extent size against intent size for each mined concept."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.5))
        ax.scatter([len(c.extent) for c in concepts], [len(c.intent) for c in concepts],
                   s=10, alpha=0.6)
        ax.set_xlabel("|extent|")
        ax.set_ylabel("|intent|")
        ax.set_title(f"{len(concepts)} concepts")
        fig.tight_layout()
        return _save(fig, path)


def plot_degrees(ctx: FormalContext, path: str | Path) -> Path:
    with plt.rc_context(STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=(7, 3))
        left.hist([len(r) for r in ctx.rows], bins=30, color="tab:blue")
        left.set_xlabel("attributes per object")
        left.set_ylabel("objects")
        right.hist([len(c) for c in ctx.cols], bins=30, color="tab:orange")
        right.set_xlabel("objects per attribute")
        right.set_ylabel("attributes")
        fig.tight_layout()
        return _save(fig, path)
