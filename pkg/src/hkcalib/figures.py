"""Matplotlib rendering for the report path (file output only)."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def save_region_figure(rows, path) -> None:
    """Comass heatmaps of the quadratic family over (lambda, mu), one panel
    per nu slice, with the calibration-region boundary overlaid.

    `rows` are dicts with keys lambda, mu, nu, comass, in_region, consistent
    (the region command's table).
    """
    plt = _pyplot()
    lams = sorted({r["lambda"] for r in rows})
    mus = sorted({r["mu"] for r in rows})
    nus = sorted({r["nu"] for r in rows})
    ncol = min(4, len(nus))
    nrow = (len(nus) + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(3.2 * ncol, 2.9 * nrow),
                             squeeze=False)
    lam_i = {v: i for i, v in enumerate(lams)}
    mu_i = {v: i for i, v in enumerate(mus)}
    vmax = max(r["comass"] for r in rows)
    for ax in axes.ravel():
        ax.set_visible(False)
    for p, nu in enumerate(nus):
        ax = axes[p // ncol][p % ncol]
        ax.set_visible(True)
        grid = np.full((len(mus), len(lams)), np.nan)
        mask = np.zeros_like(grid)
        bad_x, bad_y = [], []
        for r in rows:
            if r["nu"] != nu:
                continue
            grid[mu_i[r["mu"]], lam_i[r["lambda"]]] = r["comass"]
            mask[mu_i[r["mu"]], lam_i[r["lambda"]]] = 1.0 if r["in_region"] else 0.0
            if not r["consistent"]:
                bad_x.append(r["lambda"])
                bad_y.append(r["mu"])
        extent = (min(lams), max(lams), min(mus), max(mus))
        im = ax.imshow(grid, origin="lower", extent=extent, vmin=0.0,
                       vmax=vmax, cmap="viridis", aspect="auto")
        if mask.max() > mask.min():
            ax.contour(np.array(lams), np.array(mus), mask, levels=[0.5],
                       colors="w", linewidths=1.2)
        if bad_x:
            ax.scatter(bad_x, bad_y, marker="x", c="r", s=30)
        ax.set_title(f"nu = {nu:g}", fontsize=9)
        ax.set_xlabel("lambda", fontsize=8)
        ax.set_ylabel("mu", fontsize=8)
        ax.tick_params(labelsize=7)
    fig.colorbar(im, ax=[a for a in axes.ravel() if a.get_visible()],
                 shrink=0.85, label="estimated comass")
    fig.suptitle("comass of (l/2) w_I^2 + (m/2) w_J^2 + (v/2) w_K^2 "
                 "(white: calibration-region boundary)", fontsize=10)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_comass_figure(report, path) -> None:
    """Per-start diagnostics of one comass run: final values and iteration
    counts."""
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3))
    values = report.diagnostics.get("start_values")
    if values:
        ax1.hist(values, bins=40, color="steelblue")
        ax1.axvline(report.comass, color="r", lw=1.2,
                    label=f"comass = {report.comass:.6f}")
        ax1.legend(fontsize=8)
    ax1.set_xlabel("final value per start")
    ax1.set_ylabel("starts")
    its = sorted(report.iters_histogram.items())
    if its:
        ax2.bar([k for k, _ in its], [v for _, v in its], color="gray")
    ax2.set_xlabel("iterations to convergence")
    ax2.set_ylabel("starts")
    fig.suptitle(f"{report.form_name}: comass {report.comass:.8f} "
                 f"({report.status}, {report.converged_starts}/{report.starts} "
                 "starts converged)", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
