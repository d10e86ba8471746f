"""Figures written next to the CLI's delimited output.

Uses the Agg backend and strips PNG metadata so reruns produce identical
files.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
}


def figsize(scale=1.0, ratio=None):
    width = 6.0 * scale
    if ratio is None:
        ratio = (math.sqrt(5) - 1.0) / 2.0
    return width, width * ratio


def save(fig, outdir, name):
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_meta_histogram(stats, grammar, outdir):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        names = grammar.names
        counts = [stats.meta_histogram.get(i, 0) for i in range(len(names))]
        ax.bar(range(len(names)), counts, color="0.35")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=40, ha="right")
        ax.set_ylabel("segments")
        ax.set_title(f"Meta-action usage ({stats.n_trajectories} trajectories)")
        return save(fig, outdir, "meta_histogram.png")


def plot_lengths(la_lengths, ma_lengths, outdir):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(ratio=0.8))
        la = np.asarray(la_lengths)
        ma = np.asarray(ma_lengths)
        ax.scatter(la, ma, s=8, color="0.2", alpha=0.6, linewidths=0)
        top = max(la.max(initial=1), 1)
        ax.plot([0, top], [0, top], ls=":", color="0.6", lw=1, label="no compression")
        ax.set_xlabel("low-level actions")
        ax.set_ylabel("meta-actions")
        ax.legend(frameon=False)
        return save(fig, outdir, "lengths.png")


def plot_metrics(summary: dict, outdir):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        names = [k for k, v in summary.items() if not math.isnan(v)]
        ax.bar(names, [summary[k] for k in names], color="0.35")
        ax.set_ylim(0, 1)
        ax.set_ylabel("score")
        return save(fig, outdir, "metrics.png")


def plot_paths(pred, ref, outdir, name="paths.png", title=None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(0.7, 1.0))
        R = np.asarray(ref).reshape(-1, 2)
        P = np.asarray(pred).reshape(-1, 2)
        ax.plot(R[:, 0], R[:, 1], "-o", ms=2, color="0.1", label="reference")
        ax.plot(P[:, 0], P[:, 1], "--", lw=1, color="tab:red", label="predicted")
        ax.set_aspect("equal")
        ax.legend(frameon=False, fontsize=7)
        if title:
            ax.set_title(title)
        return save(fig, outdir, name)
