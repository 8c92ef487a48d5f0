"""Figure rendering for flow traces and envelope slices.

Headless by construction: the Agg backend is forced before pyplot loads,
and every function writes straight to a file next to the tabular output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .certify import _envelope_np
from .flow import FlowTrace


def save_trace_figure(trace: FlowTrace, path: str) -> str:
    """Two-panel figure: eigenvalues over time, then eta and R."""
    t = trace.times()
    lams = np.array([s.lam for s in trace.states])
    fig, (ax_lam, ax_eta) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for i in range(4):
        ax_lam.plot(t, lams[:, i], label=f"lambda{i + 1}")
    ax_lam.set_ylabel("Ricci eigenvalues")
    ax_lam.legend(loc="best", fontsize=8)
    ax_lam.grid(alpha=0.3)

    ax_eta.plot(t, trace.etas(), color="tab:red", label="eta = b/R")
    ax_eta.set_ylabel("eta")
    ax_eta.set_xlabel("t")
    ax_eta.grid(alpha=0.3)
    ax_r = ax_eta.twinx()
    ax_r.plot(t, trace.scalars(), color="tab:gray", alpha=0.6, label="R")
    ax_r.set_ylabel("R")
    fig.suptitle(f"eigenvalue flow (dt={trace.dt:g}, stop: {trace.reason})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_envelope_figure(gamma: float, eta_lo: float, path: str, grid: int = 201) -> str:
    """Filled contours of the envelope on the y = 0 slice of the domain,
    with the zero level drawn where the envelope changes sign."""
    etas = np.linspace(eta_lo, 1.0, grid)
    xmax = max((1.0 - eta_lo) / 4.0, 1e-9)
    xs = np.linspace(0.0, xmax, grid)
    eg, xg = np.meshgrid(etas, xs, indexing="ij")
    feasible = (xg <= (1.0 - eg) / 4.0 + 1e-12) & (xg <= eg / 2.0 + 1e-12)
    values = _envelope_np(eg, xg, np.zeros_like(eg), gamma)
    values = np.ma.masked_where(~feasible, values)

    fig, ax = plt.subplots(figsize=(7, 5))
    mesh = ax.pcolormesh(eg, xg, values, shading="auto", cmap="RdBu")
    fig.colorbar(mesh, ax=ax, label="envelope value")
    if values.min() < 0.0 < values.max():
        ax.contour(eg, xg, values, levels=[0.0], colors="k", linewidths=1.2)
    ax.set_xlabel("eta")
    ax.set_ylabel("x")
    ax.set_title(f"envelope on y=0 slice (gamma={gamma:g}, eta_lo={eta_lo:g})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
