"""CSV and manifest writers.

All numeric payloads are written with 17 significant digits so identical
configurations produce bit-identical files; nothing here embeds timestamps
or machine state. The manifest (`key = value` lines plus comment headers)
is itself a loadable config file, which makes every table recomputable
from the manifest alone.
"""

import os

import numpy as np

from . import __version__
from .analysis import FringeMetrics, ScanTable
from .propagator import RunRecord
from .units import FeasibilityReport


def fmt(value) -> str:
    """17-significant-digit text for a number; empty string for None/NaN."""
    if value is None:
        return ""
    if isinstance(value, float) and np.isnan(value):
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def time_label(t: float) -> str:
    """Short label for snapshot filenames (t8.9, t0, t100)."""
    return f"t{t:g}"


def write_manifest(path: str, manifest: dict) -> None:
    lines = [f"# snsim {__version__} resolved run configuration",
             "# this file is itself a valid --config input"]
    lines += [f"{key} = {value}" for key, value in manifest.items()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_snapshot_csv(path: str, record: RunRecord, index: int,
                       include_potential: bool) -> None:
    """One row per node: x, Re psi, Im psi, |psi|^2 [, V]."""
    x = record.lattice.x
    psi = record.snapshot_psis[index]
    rho = np.abs(psi) ** 2
    pot = None
    if include_potential and record.snapshot_potentials is not None:
        pot = record.snapshot_potentials[index]
    header = "x,re,im,density" + (",potential" if pot is not None else "")
    with open(path, "w") as fh:
        fh.write(f"# t = {fmt(record.snapshot_times[index])}\n")
        fh.write(header + "\n")
        for i in range(len(x)):
            row = [fmt(x[i]), fmt(psi[i].real), fmt(psi[i].imag), fmt(rho[i])]
            if pot is not None:
                row.append(fmt(pot[i]))
            fh.write(",".join(row) + "\n")


def write_snapshots(outdir: str, record: RunRecord, include_potential: bool,
                    subdir: str = "snapshots") -> None:
    snapdir = os.path.join(outdir, subdir)
    os.makedirs(snapdir, exist_ok=True)
    for i, t in enumerate(record.snapshot_times):
        write_snapshot_csv(
            os.path.join(snapdir, time_label(t) + ".csv"),
            record, i, include_potential,
        )


def metrics_rows(record: RunRecord, metrics: list) -> list:
    """Per-snapshot rows combining conserved series and fringe metrics."""
    rows = []
    for i, t in enumerate(record.snapshot_times):
        step = int(round(t / record.lattice.dt))
        m: FringeMetrics = metrics[i]
        rows.append({
            "t": t,
            "gravity": "on" if record.params.gravity_on else "off",
            "norm": record.norms[step],
            "kinetic": record.kinetic_series[step],
            "potential": record.potential_series[step],
            "total_energy": record.total_energy[step],
            "fringe_width": m.fringe_width,
            "visibility": m.visibility,
            "rms_spread": m.rms_spread,
            "peak_separation": m.peak_separation,
            "n_peaks": m.n_peaks,
        })
    return rows


_METRIC_COLUMNS = ("t", "gravity", "norm", "kinetic", "potential",
                   "total_energy", "fringe_width", "visibility",
                   "rms_spread", "peak_separation", "n_peaks")


def write_metrics_csv(path: str, rows: list, t_eval: float,
                      min_prominence: float) -> None:
    with open(path, "w") as fh:
        fh.write(f"# t_eval = {fmt(t_eval)}\n")
        fh.write(f"# min_prominence = {fmt(min_prominence)}\n")
        fh.write(",".join(_METRIC_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(
                row["gravity"] if col == "gravity" else fmt(row[col])
                for col in _METRIC_COLUMNS
            ) + "\n")


def write_scan_csv(path: str, table: ScanTable) -> None:
    with open(path, "w") as fh:
        fh.write(f"# t_eval = {fmt(table.t_eval)}\n")
        fh.write(f"# min_prominence = {fmt(table.min_prominence)}\n")
        for name, fit in (("fit_through_origin", table.fit_through_origin),
                          ("fit_with_intercept", table.fit_with_intercept)):
            if fit is not None:
                fh.write(f"# {name}: slope = {fmt(fit.slope)}, "
                         f"intercept = {fmt(fit.intercept)}, "
                         f"rel_rms_residual = {fmt(fit.rel_rms_residual)}\n")
        fh.write("m_tilde,inv_m_tilde,w_free,w_sn,deviation\n")
        for row in table.rows:
            fh.write(",".join([
                fmt(row.m_tilde), fmt(row.inv_m_tilde), fmt(row.w_free),
                fmt(row.w_sn), fmt(row.deviation),
            ]) + "\n")


def write_feasibility_csv(path: str, reports: list) -> None:
    with open(path, "w") as fh:
        fh.write("# slit_separation = 12 sigma_r (slits at +-d, d = 6 sigma_r)\n")
        fh.write("mass_u,mass_kg,target_m_tilde,target_t_tilde,"
                 "sigma_r_m,slit_separation_m,m_r_u,t_r_s,evolution_time_s\n")
        rep: FeasibilityReport
        for rep in reports:
            fh.write(",".join([
                fmt(rep.mass_u), fmt(rep.mass_kg), fmt(rep.target_m_tilde),
                fmt(rep.target_t_tilde), fmt(rep.sigma_r),
                fmt(rep.slit_separation), fmt(rep.scale.m_r_u),
                fmt(rep.scale.t_r), fmt(rep.evolution_time),
            ]) + "\n")


PLOT_SCRIPT = '''\
#!/usr/bin/env python3
"""Render the standard figures from the CSV artifacts in this directory.

Usage: python plot.py [directory]   (defaults to the script's directory)
"""
import csv
import glob
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path) as fh:
        reader = csv.DictReader(ln for ln in fh if not ln.startswith("#"))
        return list(reader)


def num(text):
    return float(text) if text not in ("", None) else None


def plot_snapshots(dirpath, tag):
    paths = sorted(glob.glob(os.path.join(dirpath, "t*.csv")),
                   key=lambda p: float(os.path.basename(p)[1:-4]))
    if not paths:
        return
    fig, ax = plt.subplots(figsize=(7, 4.5))
    has_potential = False
    for path in paths:
        rows = read_csv(path)
        t = os.path.basename(path)[1:-4]
        x = [num(r["x"]) for r in rows]
        ax.plot(x, [num(r["density"]) for r in rows], label=f"t = {t}")
        has_potential = has_potential or ("potential" in rows[0])
    ax.set_xlabel("x [sigma_r]")
    ax.set_ylabel("|psi|^2")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(dirpath, os.pardir, f"density_{tag}.png"), dpi=150)
    plt.close(fig)
    if has_potential:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for path in paths:
            rows = read_csv(path)
            t = os.path.basename(path)[1:-4]
            x = [num(r["x"]) for r in rows]
            ax.plot(x, [num(r["potential"]) for r in rows], label=f"t = {t}")
        ax.set_xlabel("x [sigma_r]")
        ax.set_ylabel("V(x)")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(os.path.join(dirpath, os.pardir, f"potential_{tag}.png"), dpi=150)
        plt.close(fig)


def plot_scan(path):
    rows = read_csv(path)
    inv_m = [num(r["inv_m_tilde"]) for r in rows]
    w_free = [num(r["w_free"]) for r in rows]
    w_sn = [num(r["w_sn"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    pts = [(x, w) for x, w in zip(inv_m, w_free) if w is not None]
    if pts:
        xs, ws = zip(*pts)
        ax.plot(xs, ws, "k+", ms=10, label="free")
        if len(xs) > 1:
            n = len(xs)
            sx, sy = sum(xs), sum(ws)
            sxx = sum(x * x for x in xs)
            sxy = sum(x * y for x, y in zip(xs, ws))
            slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
            icept = (sy - slope * sx) / n
            grid = [min(xs), max(xs)]
            ax.plot(grid, [slope * g + icept for g in grid], "k-",
                    lw=0.8, label="trend line")
    pts = [(x, w) for x, w in zip(inv_m, w_sn) if w is not None]
    if pts:
        xs, ws = zip(*pts)
        ax.plot(xs, ws, "r*", ms=10, label="self-gravity")
    ax.set_xlabel("1 / m_tilde")
    ax.set_ylabel("fringe width w [sigma_r]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(os.path.dirname(path), "scan.png"), dpi=150)
    plt.close(fig)


def main():
    base = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(
        os.path.abspath(__file__))
    for sub in ("snapshots", "snapshots_free"):
        dirpath = os.path.join(base, sub)
        if os.path.isdir(dirpath):
            plot_snapshots(dirpath, sub.replace("snapshots", "run").strip("_"))
    scan = os.path.join(base, "scan.csv")
    if os.path.exists(scan):
        plot_scan(scan)
    print("figures written to", base)


if __name__ == "__main__":
    main()
'''


def write_plot_script(outdir: str) -> str:
    path = os.path.join(outdir, "plot.py")
    with open(path, "w") as fh:
        fh.write(PLOT_SCRIPT)
    return path
