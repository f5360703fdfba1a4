"""Matplotlib rendering of sweep results, ability distributions, and
forwarding histograms.  All functions write a figure file and return the
path; the CLI calls them next to its CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .harness import SweepReport
from .models import AbilityHistogram


def plot_sweep(reports: list[SweepReport], path: str | Path) -> Path:
    """Mean path length vs r, one line per (h or m, k, c) combination."""
    path = Path(path)
    groups: dict[tuple, list[SweepReport]] = {}
    for rep in reports:
        groups.setdefault((rep.h_or_m, rep.k, rep.c), []).append(rep)

    fig, ax = plt.subplots(figsize=(6, 4))
    dim = "h" if reports and reports[0].kind == "unified" else "m"
    for (hm, k, c), reps in sorted(groups.items()):
        reps = sorted(reps, key=lambda x: x.r)
        label = f"{dim}={hm}, k={k}"
        if c > 0:
            label += f", c={c}"
        ax.errorbar(
            [x.r for x in reps],
            [x.mean_hops for x in reps],
            yerr=[2 * x.stderr_hops for x in reps],
            marker="o", markersize=3, capsize=2, label=label,
        )
    ax.set_xlabel("r")
    ax.set_ylabel("average routing path length")
    if reports:
        ax.set_title(f"{reports[0].kind} model (n={reports[0].n})")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_distribution(hist: AbilityHistogram, path: str | Path) -> Path:
    """Expert count per total ability for one diversified lattice."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    phis = sorted(hist.counts)
    ax.plot(phis, [hist.counts[p] for p in phis], marker="o", markersize=3)
    ax.set_xlabel("total ability")
    ax.set_ylabel("number of experts")
    ax.set_title(f"m={hist.m}, max level={hist.lam} (n={hist.lam ** hist.m})")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_forwarding(
    histogram: tuple[tuple[float, float, float], ...], path: str | Path
) -> Path:
    """Forwarding probability vs relative expertise difference."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    if histogram:
        width = histogram[0][1] - histogram[0][0]
        ax.bar([lo for lo, _, _ in histogram], [p for _, _, p in histogram],
               width=width, align="edge", edgecolor="black", linewidth=0.3)
    ax.set_xlabel("relative expertise difference")
    ax.set_ylabel("forwarding probability")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
