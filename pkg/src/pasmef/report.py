"""Figures written next to the CLI's image and CSV outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

ROW_LABELS = ("PCA", "exposedness", "saliency", "final")


def weights_overview(path, pca, exposedness, saliency, weights, names=None, dpi=100):
    """Grid of weight maps: one row per branch, one column per exposure."""
    rows = (pca, exposedness, saliency, weights)
    n = len(weights)
    h, w = weights.shape[1:3]
    cell = 2.0
    fig, axes = plt.subplots(4, n, figsize=(cell * n * w / max(h, w) + 1, cell * 4 * h / max(h, w)),
                             squeeze=False)
    for r, (label, maps) in enumerate(zip(ROW_LABELS, rows)):
        for c in range(n):
            ax = axes[r, c]
            ax.imshow(maps[c], cmap="gray", vmin=0.0, vmax=1.0)
            ax.set_xticks([])
            ax.set_yticks([])
            if c == 0:
                ax.set_ylabel(label)
            if r == 0 and names:
                ax.set_title(str(names[c]), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def score_chart(path, names, scores, seconds=None, dpi=100):
    """Bar chart of per-stack MEF-SSIM, with the average drawn as a line."""
    scores = np.asarray(scores, dtype=float)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(names) + 2), 3.5))
    x = np.arange(len(names))
    ax.bar(x, scores, color="0.55")
    if len(scores):
        ax.axhline(scores.mean(), color="k", lw=1, ls="--", label=f"avg {scores.mean():.3f}")
        lo = min(scores.min(), 0.9)
        ax.set_ylim(lo - 0.01, 1.0)
        ax.legend(loc="lower right", fontsize=8)
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("MEF-SSIM")
    if seconds is not None and len(seconds):
        ax.set_title(f"mean run-time {np.mean(seconds):.2f} s", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
