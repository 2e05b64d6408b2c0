"""Bar charts for classification tables, search counters and point counts."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0

RC = {
    "font.size": 9,
    "font.family": "serif",
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "savefig.bbox": "tight",
    "savefig.dpi": 150,
}

COMPUTED = "#3b6ea5"
LISTED = "#c9c9c9"
MISMATCH = "#b5403a"


def figure(width=5.0, height=None):
    """Figure and axes with golden-ratio proportions."""
    plt.rcParams.update(RC)
    height = height or width * GOLDEN
    fig, ax = plt.subplots(figsize=(width, height))
    despine(ax)
    return fig, ax


def despine(ax):
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.xaxis.set_ticks_position("bottom")
    ax.yaxis.set_ticks_position("left")


def save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def orbit_counts_chart(rows, path):
    """rows: (tag, computed, listed or None)."""
    fig, ax = figure(6.0)
    xs = range(len(rows))
    w = 0.38
    listed = [r[2] if r[2] is not None else 0 for r in rows]
    colors = [COMPUTED if r[2] in (None, r[1]) else MISMATCH for r in rows]
    ax.bar([x - w / 2 for x in xs], [r[1] for r in rows], w, color=colors, label="computed")
    ax.bar([x + w / 2 for x in xs], listed, w, color=LISTED, label="listed")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r[0] for r in rows], rotation=35, ha="right")
    ax.set_ylabel("PGL3(F3)-orbits")
    ax.legend()
    return save(fig, path)


def stage_chart(summary: dict, path, title=""):
    """Per-stage rejections and survivors of one search, log scale."""
    fig, ax = figure(4.5)
    labels = list(summary["rejected"]) + ["survivors"]
    vals = list(summary["rejected"].values()) + [summary["survivors"]]
    ax.bar(labels, [max(v, 0.8) for v in vals], color=COMPUTED)
    ax.set_yscale("log")
    ax.set_ylabel("candidates")
    if title:
        ax.set_title(title)
    for i, v in enumerate(vals):
        ax.text(i, max(v, 0.8) * 1.15, str(v), ha="center", fontsize=7)
    return save(fig, path)


def point_count_chart(rows, path):
    """rows: (curve name, N1); bars against the reference value 32."""
    fig, ax = figure(5.0)
    names = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    ax.bar(names, vals, color=[COMPUTED if v == 32 else MISMATCH for v in vals])
    ax.axhline(32, color="k", lw=0.6, ls="--")
    ax.set_ylabel("#C(F9)")
    ax.set_ylim(0, max(vals + [32]) * 1.15)
    plt.setp(ax.get_xticklabels(), rotation=30, ha="right")
    return save(fig, path)


def weil_class_chart(counts: dict, path):
    """counts: factored Weil polynomial -> number of curves."""
    fig, ax = figure(6.0, 2.6)
    labels = list(counts)
    ax.barh(range(len(labels)), [counts[k] for k in labels], color=COMPUTED)
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=7)
    ax.set_xlabel("curves")
    return save(fig, path)
