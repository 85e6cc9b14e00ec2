"""Matplotlib renderings for the report paths: Bratteli diagrams for towers
and dimension charts for sector tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def bratteli_figure(Lam: np.ndarray, path: str, floors=("A", "B"), depth_val=None,
                    index_val=None):
    """Two-floor Bratteli diagram of an inclusion matrix.

    Vertices are the simple summands of each algebra; edge multiplicities are
    drawn as parallel strands with the count annotated when > 1.
    """
    Lam = np.asarray(Lam)
    na, nb = Lam.shape
    fig, ax = plt.subplots(figsize=(max(4, max(na, nb) * 1.2), 3.2))
    xa = np.linspace(0, 1, na + 2)[1:-1]
    xb = np.linspace(0, 1, nb + 2)[1:-1]
    for i in range(na):
        for j in range(nb):
            m = int(Lam[i, j])
            if m == 0:
                continue
            offsets = np.linspace(-0.012, 0.012, m) if m > 1 else [0.0]
            for off in offsets:
                ax.plot([xa[i] + off, xb[j] + off], [1.0, 0.0],
                        color="steelblue", lw=1.2, zorder=1)
            if m > 1:
                ax.text((xa[i] + xb[j]) / 2, 0.5, str(m), fontsize=9,
                        ha="center", va="center",
                        bbox=dict(fc="white", ec="none", pad=0.5))
    ax.scatter(xa, np.ones(na), s=160, c="white", edgecolors="black", zorder=2)
    ax.scatter(xb, np.zeros(nb), s=160, c="white", edgecolors="black", zorder=2)
    ax.set_ylim(-0.25, 1.25)
    ax.set_xlim(-0.05, 1.05)
    ax.set_yticks([0.0, 1.0])
    ax.set_yticklabels([floors[1], floors[0]])
    ax.set_xticks([])
    for s in ("top", "right", "bottom", "left"):
        ax.spines[s].set_visible(False)
    title = "Bratteli diagram"
    extras = []
    if index_val is not None:
        extras.append(f"index {index_val:.6g}")
    if depth_val is not None:
        extras.append(f"depth {depth_val}")
    if extras:
        title += " (" + ", ".join(extras) + ")"
    ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def sector_figure(labels, dims, n_table, path: str, title="sector data"):
    """Grouped bars: quantum dimension d_s and symmetry multiplicity N_s."""
    labels = [str(l) for l in labels]
    x = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(max(4, len(labels) * 1.1), 3.2))
    ax.bar(x - 0.18, np.asarray(dims, dtype=float), width=0.34,
           color="steelblue", label="d_s")
    ax.bar(x + 0.18, np.asarray(n_table, dtype=float), width=0.34,
           color="darkorange", label="N_s")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.legend(frameon=False)
    ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
