"""Profile panels and displacement scatter rendered from interchange files."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PlotDataError, displacement_rows, read_snapshots, read_suite_report


def _match_time(blocks, t_want):
    for b in blocks:
        if abs(b["t"] - t_want) <= 1e-9 * max(1.0, abs(t_want)):
            return b
    avail = ", ".join(f"{b['t']:g}" for b in blocks)
    raise PlotDataError(f"time {t_want:g} not in the CSV; available times: {avail}")


def plot_profiles(csv_path, times, out_path, ref="none", title=None):
    """Render one column of panels per requested time: v(r) on top, rho(r) below it
    when the data carries a density.

    times=None/[] plots every block. ref overlays a reference curve on each
    panel: "initial" uses the CSV's own first block, a path uses the first
    block of that CSV, "none" skips the overlay.
    """
    blocks = read_snapshots(csv_path)
    chosen = blocks if not times else [_match_time(blocks, t) for t in times]
    ref_block = None
    if ref == "initial":
        ref_block = blocks[0]
    elif ref not in (None, "", "none"):
        ref_block = read_snapshots(ref)[0]

    has_rho = chosen[0]["rho"] is not None
    nrows = 2 if has_rho else 1
    fig, axes = plt.subplots(nrows, len(chosen), squeeze=False, sharex=True, sharey="row",
                             figsize=(3.4 * len(chosen), 2.8 * nrows))
    for j, b in enumerate(chosen):
        ax = axes[0][j]
        if ref_block is not None:
            ax.plot(ref_block["r"], ref_block["v"], color="0.7", lw=2.4, label="reference")
        ax.plot(b["r"], b["v"], "k-", lw=1.0, label="v")
        ax.set_title(f"t = {b['t']:g}")
        axes[-1][j].set_xlabel("r")
        if has_rho:
            ax = axes[1][j]
            if ref_block is not None and ref_block["rho"] is not None:
                ax.plot(ref_block["r"], ref_block["rho"], color="0.7", lw=2.4)
            ax.plot(b["r"], b["rho"], "k-", lw=1.0)
    axes[0][0].set_ylabel("v")
    if has_rho:
        axes[1][0].set_ylabel("rho")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_displacement(report_path, out_path, criterion=None):
    """Scatter shock displacement against injected perturbation mass.

    Fits a least-squares line when there are two or more distinct abscissae and
    prints slope/intercept/R^2; a single point is plotted without a fit.
    Returns (slope, intercept, r2) or None.
    """
    x, y, crit_n = displacement_rows(read_suite_report(report_path), criterion)
    fig, ax = plt.subplots(figsize=(4.4, 3.4))
    ax.plot(x, y, "ko", ms=5)
    fit = None
    if len(x) >= 2 and np.ptp(x) > 0:
        slope, intercept = np.polyfit(x, y, 1)
        pred = slope * x + intercept
        ss_tot = float(np.sum((y - np.mean(y)) ** 2))
        r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum((y - pred) ** 2)) / ss_tot
        xs = np.array([x.min(), x.max()])
        ax.plot(xs, slope * xs + intercept, "k--", lw=1.0)
        fit = (float(slope), float(intercept), r2)
        print(f"criterion {crit_n}: slope {slope:.4f}  intercept {intercept:.5f}  "
              f"R^2 {r2:.5f}")
    else:
        print(f"criterion {crit_n}: {len(x)} point(s), no fit")
    ax.set_xlabel("perturbation integral")
    ax.set_ylabel("shock displacement")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return fit
