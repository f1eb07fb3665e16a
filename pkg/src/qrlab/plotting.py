"""Figures for the reproduction report (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _new(width=6.0, ratio=0.6):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(width, width * ratio))
    return fig, ax


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path)
    plt.close(fig)
    return path


def plot_weight_distribution(wd, path, dual_wd=None, title=None) -> Path:
    """Bar chart of A_w on a log scale, with the dual distribution as markers."""
    fig, ax = _new()
    ws, counts = zip(*wd.pairs())
    ax.bar(ws, counts, width=1.2, color="0.35", label="code")
    if dual_wd is not None:
        dws, dcounts = zip(*dual_wd.pairs())
        ax.plot(dws, dcounts, "o", mfc="none", color="tab:red", label="dual")
        ax.legend(frameon=False)
    ax.set_yscale("log")
    ax.set_xlabel("weight w")
    ax.set_ylabel("number of codewords $A_w$")
    ax.set_title(title or f"weight distribution, n = {wd.n}")
    return _save(fig, path)


def plot_incidence_profiles(profiles: dict, path) -> Path:
    """How many t-subsets are covered c times, one panel-series per design."""
    fig, ax = _new()
    for i, (label, prof) in enumerate(profiles.items()):
        cs, mult = zip(*prof.counts.items())
        ax.bar([c + 0.3 * i for c in cs], mult, width=0.3, label=label)
    ax.set_xlabel("blocks containing the t-subset")
    ax.set_ylabel("number of t-subsets")
    ax.legend(frameon=False)
    ax.set_title("t-subset coverage")
    return _save(fig, path)


def plot_orbit_sizes(sizes_by_label: dict, path) -> Path:
    fig, ax = _new(width=5.0)
    labels = list(sizes_by_label)
    for i, label in enumerate(labels):
        sizes = sizes_by_label[label]
        bottom = 0
        for s in sizes:
            ax.bar(i, s, bottom=bottom, edgecolor="white", color="0.45")
            bottom += s
    ax.set_xticks(range(len(labels)), labels)
    ax.set_ylabel("subsets (stacked by orbit)")
    ax.set_title("orbits of the automorphism group")
    return _save(fig, path)
