"""Matplotlib figure rendering for the report path.

The CLI writes these PNGs next to the CSV artifacts so a finished run is
inspectable without re-running anything; the emitted plot.py script can
regenerate equivalent figures from the CSVs alone.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .analysis import AttractionSeries, ScanTable
from .propagator import RunRecord


def _new_axes(xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return fig, ax


def save_density_snapshots(record: RunRecord, path: str) -> None:
    """Density at each snapshot time on one axes."""
    fig, ax = _new_axes(r"$\tilde{x}$  [$\sigma_r$]", r"$|\tilde\Psi|^2$")
    x = record.lattice.x
    for t, rho in zip(record.snapshot_times, record.snapshot_densities()):
        ax.plot(x, rho, lw=1.0, label=rf"$\tilde t = {t:g}$")
    grav = "on" if record.params.gravity_on else "off"
    ax.set_title(rf"$\tilde m = {record.params.m_tilde:g}$, self-gravity {grav}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_potential_snapshots(record: RunRecord, path: str) -> None:
    """Self-gravity potential at each snapshot time (gravity-on runs only)."""
    if record.snapshot_potentials is None:
        return
    fig, ax = _new_axes(r"$\tilde{x}$  [$\sigma_r$]", r"$V_G(\tilde x)$")
    x = record.lattice.x
    for t, v in zip(record.snapshot_times, record.snapshot_potentials):
        ax.plot(x, v, lw=1.0, label=rf"$\tilde t = {t:g}$")
    ax.set_title(rf"$\tilde m = {record.params.m_tilde:g}$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_compare(record_free: RunRecord, record_sn: RunRecord,
                 t_eval: float, path: str) -> None:
    """Overlay free vs self-gravitating density at the evaluation time."""
    fig, ax = _new_axes(r"$\tilde{x}$  [$\sigma_r$]", r"$|\tilde\Psi|^2$")
    x = record_free.lattice.x
    ax.plot(x, record_free.density_at(t_eval), "k-", lw=1.0, label="free")
    ax.plot(x, record_sn.density_at(t_eval), "r--", lw=1.0, label="self-gravity")
    ax.set_title(
        rf"$\tilde m = {record_free.params.m_tilde:g}$, $\tilde t = {t_eval:g}$"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scan(table: ScanTable, path: str) -> None:
    """Fringe width vs 1/m: '+' free points with trend line, '*' self-gravity."""
    fig, ax = _new_axes(r"$1/\tilde{m}$", r"fringe width $w$  [$\sigma_r$]")
    inv_m = np.array([r.inv_m_tilde for r in table.rows])
    w_free = np.array([np.nan if r.w_free is None else r.w_free for r in table.rows])
    w_sn = np.array([np.nan if r.w_sn is None else r.w_sn for r in table.rows])
    ax.plot(inv_m, w_free, "k+", ms=10, label="free")
    if table.fit_with_intercept is not None:
        fit = table.fit_with_intercept
        grid = np.linspace(inv_m.min(), inv_m.max(), 2)
        ax.plot(grid, fit.slope * grid + fit.intercept, "k-", lw=0.8,
                label="trend line")
    ax.plot(inv_m, w_sn, "r*", ms=10, label="self-gravity")
    ax.set_title(rf"$\tilde t = {table.t_eval:g}$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_attraction(series: AttractionSeries, path: str) -> None:
    """Outer-peak separation and rms spread against time."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax1.plot(series.times, series.separations, "o-", ms=3)
    ax1.set_ylabel("outer-peak separation")
    if series.merge_time is not None:
        ax1.axvline(series.merge_time, color="r", lw=0.8, ls="--")
        ax1.annotate(f"merge at t = {series.merge_time:g}",
                     (series.merge_time, 0.5 * np.nanmax(series.separations)),
                     color="r", fontsize=8)
    ax2.plot(series.times, series.spreads, "o-", ms=3)
    ax2.set_ylabel("rms spread")
    ax2.set_xlabel(r"$\tilde{t}$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
