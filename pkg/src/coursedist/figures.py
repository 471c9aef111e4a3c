"""Matplotlib rendering of pmfs, comparisons, and convergence reports.

Figures are written straight to files (Agg backend, no display); every CLI
subcommand accepts --plot to drop a figure next to its CSV/JSON output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .asymptotic import ConvergenceReport

__all__ = [
    "save_pmf_figure",
    "save_comparison_figure",
    "save_marginals_figure",
    "save_convergence_figure",
]

_DARK = "#1f3a5f"
_LIGHT = "#e08a3c"


def save_pmf_figure(path: str, pmf: np.ndarray, title: str, ylabel: str = "probability"):
    """Stem plot of a probability mass function over k = 0..n."""
    ks = np.arange(len(pmf))
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    markerline, stemlines, _ = ax.stem(ks, pmf)
    plt.setp(stemlines, color=_DARK, linewidth=1.2)
    plt.setp(markerline, color=_DARK, markersize=4)
    ax.set_xlabel("understood sessions k")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_comparison_figure(path: str, exact: np.ndarray, ref: np.ndarray, title: str):
    """Exact pmf (dark) against the binomial reference (light), plus ratios."""
    ks = np.arange(len(exact))
    fig, (ax, ax2) = plt.subplots(
        2, 1, figsize=(6.4, 5.6), sharex=True, height_ratios=[3, 1]
    )
    ax.plot(ks, exact, color=_DARK, marker="o", markersize=3, label="exact")
    ax.plot(ks, ref, color=_LIGHT, marker="s", markersize=3, label="binomial")
    ax.set_ylabel("probability")
    ax.set_title(title)
    ax.legend()
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = exact / ref
    ax2.axhline(1.0, color="0.6", linewidth=0.8)
    ax2.plot(ks, ratio, color=_DARK, linewidth=1.0)
    ax2.set_xlabel("understood sessions k")
    ax2.set_ylabel("ratio")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_marginals_figure(path: str, marginals: np.ndarray, title: str):
    """Per-session understanding probabilities p_1..p_n."""
    ms = np.arange(1, len(marginals) + 1)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(ms, marginals, color=_DARK, marker="o", markersize=3)
    ax.set_xlabel("session m")
    ax.set_ylabel("understanding probability")
    ax.set_ylim(0.0, 1.0)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_convergence_figure(path: str, report: ConvergenceReport, title: str):
    """Minimum probability ratio against n, one line per quality value."""
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    qs = sorted({r.q for r in report.rows})
    cmap = plt.get_cmap("viridis")
    for i, q in enumerate(qs):
        rows = sorted((r for r in report.rows if r.q == q and r.ok), key=lambda r: r.n)
        ns = [r.n for r in rows]
        color = cmap(i / max(1, len(qs) - 1))
        ax.plot(ns, [r.min_ratio for r in rows], color=color, marker="o",
                markersize=3, label=f"q={q:g}")
        ax2.plot(ns, [r.max_abs_log_ratio_central for r in rows], color=color,
                 marker="o", markersize=3, label=f"q={q:g}")
    ax.axhline(0.95, color="0.6", linewidth=0.8, linestyle="--")
    ax.set_xlabel("sessions n")
    ax.set_ylabel("min ratio (all k)")
    ax.legend(fontsize=8)
    ax2.set_xlabel("sessions n")
    ax2.set_ylabel("max |log ratio| (central window)")
    ax2.set_yscale("log")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
