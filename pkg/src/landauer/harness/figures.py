"""Figure rendering for scenario reports.

Figures are a convenience layer on top of the CSV tables (the CSV stays the
machine-readable contract). Rendering is headless and deterministic: the
Agg backend, no timestamps in the PNG metadata.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "landauer",
})


def save_figure(fig, outdir: str, name: str) -> str:
    filename = f"{name}.png"
    fig.savefig(
        os.path.join(outdir, filename),
        bbox_inches="tight",
        metadata={"Software": None},
    )
    plt.close(fig)
    return filename


def staged_convergence(outdir: str, stage_counts, gaps, guide_scale: float) -> str:
    """Heat-vs-entropy gap against stage count, with a 1/N guide line."""
    fig, ax = plt.subplots()
    ax.loglog(stage_counts, gaps, "o-", label="beta dQ_N - dS")
    guide = [guide_scale / n for n in stage_counts]
    ax.loglog(stage_counts, guide, "--", color="gray", label="1/N guide")
    ax.set_xlabel("stages N")
    ax.set_ylabel("excess heat (nats)")
    ax.set_title("staged erasure: approach to the quasi-static limit")
    ax.legend()
    return save_figure(fig, outdir, "staged_convergence")


def bound_scatter(outdir: str, delta_s, beta_dq, s0_max: float) -> str:
    """Measured heat against entropy drop, with the bound diagonal."""
    fig, ax = plt.subplots()
    ax.scatter(delta_s, beta_dq, s=6, alpha=0.5, label="instances")
    lo = min(min(delta_s), 0.0)
    hi = max(max(delta_s), s0_max)
    ax.plot([lo, hi], [lo, hi], "-", color="black", linewidth=1, label="beta dQ = dS")
    ax.set_xlabel("dS (nats)")
    ax.set_ylabel("beta dQ (nats)")
    ax.set_title("Landauer bound across random processes")
    ax.legend()
    return save_figure(fig, outdir, "bound_scatter")


def quench_trajectory(outdir: str, times, heats, sigmas) -> str:
    """Heat (three bookkeeping routes overlap) and entropy production."""
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 5.0))
    for label, series in heats.items():
        ax1.plot(times, series, label=label, linewidth=1)
    ax1.set_ylabel("heat dQ")
    ax1.legend(fontsize=7)
    ax1.set_title("instantaneous quench")
    ax2.plot(times, sigmas, color="tab:red", linewidth=1)
    ax2.set_ylabel("sigma (nats)")
    ax2.set_xlabel("t")
    return save_figure(fig, outdir, "quench_trajectory")


def sigma_decay(outdir: str, horizons, sigmas) -> str:
    """Entropy production against drive horizon."""
    fig, ax = plt.subplots()
    ax.loglog(horizons, sigmas, "o-", label="sigma_T")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("sigma_T (nats)")
    ax.set_title("quasi-static decay of entropy production")
    ax.legend()
    return save_figure(fig, outdir, "sigma_decay")
