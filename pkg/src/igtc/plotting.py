"""File-based figure rendering for CLI report paths.

Everything draws through the Agg backend and writes straight to disk; nothing
here opens a window.  These are quick-look figures meant to sit next to the
exported CSV, not publication styling.
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .model import TimeSeries
from .solver import BranchFamily

__all__ = ["plot_timeseries", "plot_roots"]


def plot_timeseries(series: Mapping[str, TimeSeries], out_path,
                    title: Optional[str] = None, ylabel: Optional[str] = None) -> Path:
    """One axes, one labeled curve per entry; complex data plots its real part."""
    out = Path(out_path)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for label, ts in series.items():
        vals = ts.values.real if hasattr(ts.values, "real") else ts.values
        ax.plot(ts.t, vals, lw=1.0, label=label)
    ax.set_xlabel("t")
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=9)
    ax.grid(alpha=0.25, lw=0.5)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_roots(family: BranchFamily, out_path,
               sigmas: Optional[Sequence[int]] = None) -> Path:
    """Scatter of the root sets in the complex plane, one marker per branch."""
    out = Path(out_path)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    markers = ["o", "s", "^", "D", "v", "P", "X", "*"]
    chosen = sigmas if sigmas is not None else range(1, len(family) + 1)
    for i, sigma in enumerate(chosen):
        rs, meta = family.by_sigma(sigma)
        if rs.m == 0:
            continue
        ax.scatter(rs.roots.real, rs.roots.imag, s=28,
                   marker=markers[i % len(markers)],
                   label=f"sigma={sigma}, E={meta.energy:.4f}")
    ax.axhline(0.0, color="k", lw=0.5, alpha=0.4)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    p = family.params
    ax.set_title(f"c={p.c:g}, Delta={p.delta:g}, 2S={p.two_s}, M={p.m_excitations}")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(alpha=0.25, lw=0.5)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
