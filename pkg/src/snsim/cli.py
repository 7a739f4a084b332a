"""Campaign driver: single runs, free-vs-gravity comparisons, mass sweeps,
and feasibility tables, persisted as CSV + manifest + figures.

Exit status: 0 success, 2 configuration problem, 3 numerical failure
(boundary reflection, non-finite amplitudes), 1 unexpected error.
"""

import argparse
import multiprocessing
import os
import sys
from dataclasses import replace

from . import __version__, figures, output
from .analysis import attraction_series, compute_fringe_metrics, fringe_width_scan
from .config import MODES, RunConfig, load_config_file, resolve, to_manifest_dict
from .errors import ConfigurationError, InvalidParameterError, NumericalFailureError
from .lattice import prepare_double_gaussian
from .propagator import evolve
from .units import feasibility_report, u_to_kg

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _run_one(config: RunConfig, m_tilde: float, gravity_on: bool):
    """Execute one simulation described by the config at the given mass."""
    lattice = config.lattice()
    params = config.setup_params(m_tilde=m_tilde, gravity_on=gravity_on)
    initial = prepare_double_gaussian(lattice, params)
    return evolve(
        initial, params, lattice,
        scheme=config.step_scheme(),
        snapshot_times=config.snapshots,
        boundary_guard=config.boundary_guard,
    )


def _sweep_worker(args):
    config, m_tilde, gravity_on = args
    return _run_one(config, m_tilde, gravity_on)


def _metrics_for(record, config):
    return [compute_fringe_metrics(rho, record.lattice, config.min_prominence)
            for rho in record.snapshot_densities()]


def _mode_single(config: RunConfig, outdir: str) -> None:
    record = _run_one(config, config.m_tilde, config.gravity_on())
    output.write_snapshots(outdir, record, config.emit_potential)
    rows = output.metrics_rows(record, _metrics_for(record, config))
    output.write_metrics_csv(os.path.join(outdir, "metrics.csv"), rows,
                             config.t_eval, config.min_prominence)
    if config.figures:
        figures.save_density_snapshots(record, os.path.join(outdir, "density.png"))
        if config.emit_potential and record.params.gravity_on:
            figures.save_potential_snapshots(
                record, os.path.join(outdir, "potential.png"))
        if len(record.snapshot_times) >= 2:
            figures.save_attraction(
                attraction_series(record, config.min_prominence),
                os.path.join(outdir, "attraction.png"))
    print(f"single run (m_tilde={config.m_tilde:g}, gravity {config.gravity}) "
          f"-> {outdir}")


def _mode_compare(config: RunConfig, outdir: str) -> None:
    rec_sn = _run_one(config, config.m_tilde, True)
    rec_free = _run_one(config, config.m_tilde, False)
    output.write_snapshots(outdir, rec_sn, config.emit_potential, "snapshots")
    output.write_snapshots(outdir, rec_free, False, "snapshots_free")
    rows = (output.metrics_rows(rec_sn, _metrics_for(rec_sn, config))
            + output.metrics_rows(rec_free, _metrics_for(rec_free, config)))
    output.write_metrics_csv(os.path.join(outdir, "metrics.csv"), rows,
                             config.t_eval, config.min_prominence)
    if config.figures:
        figures.save_compare(rec_free, rec_sn, config.t_eval,
                             os.path.join(outdir, "compare.png"))
        figures.save_density_snapshots(rec_sn, os.path.join(outdir, "density.png"))
        if config.emit_potential:
            figures.save_potential_snapshots(
                rec_sn, os.path.join(outdir, "potential.png"))
    print(f"compare run (m_tilde={config.m_tilde:g}) -> {outdir}")


def _mode_sweep(config: RunConfig, outdir: str) -> None:
    tasks = [(config, m, g) for m in config.masses for g in (False, True)]
    jobs = min(config.effective_jobs(), len(tasks))
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            records = pool.map(_sweep_worker, tasks)
    else:
        records = [_sweep_worker(t) for t in tasks]
    table = fringe_width_scan(records, config.t_eval, config.min_prominence)
    output.write_scan_csv(os.path.join(outdir, "scan.csv"), table)
    if config.figures:
        figures.save_scan(table, os.path.join(outdir, "scan.png"))
    print(f"sweep over m_tilde in {list(config.masses)} -> {outdir}")
    for row in table.rows:
        print(f"  m={row.m_tilde:g}: w_free={output.fmt(row.w_free) or 'absent'} "
              f"w_sn={output.fmt(row.w_sn) or 'absent'} "
              f"deviation={output.fmt(row.deviation) or 'absent'}")


def _mode_feasibility(config: RunConfig, outdir: str) -> None:
    reports = [
        feasibility_report(u_to_kg(mass_u), config.target_m_tilde,
                           config.target_t_tilde)
        for mass_u in config.masses
    ]
    output.write_feasibility_csv(os.path.join(outdir, "feasibility.csv"), reports)
    print(f"feasibility targets m_tilde={config.target_m_tilde:g}, "
          f"t_tilde={config.target_t_tilde:g}")
    for rep in reports:
        print(f"  mass {rep.mass_u:.6g} u: sigma_r = {rep.sigma_r * 1e9:.4g} nm, "
              f"slit separation = {rep.slit_separation * 1e9:.4g} nm, "
              f"evolution time = {rep.evolution_time:.4g} s")


def run(config: RunConfig) -> None:
    """Validate, persist the manifest, and dispatch on mode."""
    config = resolve(config)
    outdir = config.outdir
    os.makedirs(outdir, exist_ok=True)
    output.write_manifest(os.path.join(outdir, "manifest.txt"),
                          to_manifest_dict(config))
    if config.emit_plot_script:
        output.write_plot_script(outdir)
    dispatch = {
        "single": _mode_single,
        "compare": _mode_compare,
        "sweep": _mode_sweep,
        "feasibility": _mode_feasibility,
    }
    dispatch[config.mode](config, outdir)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snsim",
        description="Double-slit Schrodinger-Newton simulator "
                    "(dimensionless units; see README).",
    )
    parser.add_argument("--version", action="version", version=f"snsim {__version__}")
    parser.add_argument("--config", metavar="PATH",
                        help="flat key = value config file (flags override it)")
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--mass", type=float, metavar="M",
                        help="dimensionless m_tilde (feasibility mode: mass in u)")
    parser.add_argument("--masses", metavar="LIST",
                        help="comma-separated sweep masses "
                             "(feasibility mode: masses in u)")
    parser.add_argument("--gravity", choices=("on", "off"))
    parser.add_argument("--scheme", choices=("frozen", "pc"))
    parser.add_argument("--picard-iterations", type=int, metavar="N")
    parser.add_argument("--t-eval", type=float, metavar="T")
    parser.add_argument("--t-final", type=float, metavar="T")
    parser.add_argument("--n-steps", type=int, metavar="N")
    parser.add_argument("--n-points", type=int, metavar="N")
    parser.add_argument("--x-min", type=float, metavar="X")
    parser.add_argument("--x-max", type=float, metavar="X")
    parser.add_argument("--d", type=float, metavar="D",
                        help="half slit separation")
    parser.add_argument("--sigma", type=float, metavar="S",
                        help="Gaussian packet width")
    parser.add_argument("--epsilon", type=float, metavar="E",
                        help="kernel regularization length")
    parser.add_argument("--coupling", type=float, metavar="C",
                        help="multiplier on the m_tilde^2 self-gravity term")
    parser.add_argument("--snapshots", metavar="LIST",
                        help="comma-separated snapshot times")
    parser.add_argument("--min-prominence", type=float, metavar="P")
    parser.add_argument("--boundary-guard", type=float, metavar="A")
    parser.add_argument("--target-m-tilde", type=float, metavar="M")
    parser.add_argument("--target-t-tilde", type=float, metavar="T")
    parser.add_argument("--outdir", metavar="PATH")
    parser.add_argument("--jobs", type=int, metavar="N",
                        help="parallel sweep workers (default: all cores)")
    parser.add_argument("--emit-potential", action="store_true", default=None)
    parser.add_argument("--emit-plot-script", action="store_true", default=None)
    parser.add_argument("--no-figures", dest="figures", action="store_false",
                        default=None)
    return parser


_FLAG_TO_KEY = {
    "mass": "m_tilde",
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = load_config_file(args.config, cfg)
    overrides = {}
    for name, value in vars(args).items():
        if name in ("config",) or value is None:
            continue
        key = _FLAG_TO_KEY.get(name, name)
        if key in ("masses", "snapshots"):
            value = tuple(float(tok) for tok in str(value).split(","))
        overrides[key] = value
    # feasibility --mass means a mass list in u, not m_tilde
    if overrides.get("mode", cfg.mode) == "feasibility" and "m_tilde" in overrides:
        overrides.setdefault("masses", (overrides.pop("m_tilde"),))
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run(config_from_args(args))
    except (ConfigurationError, InvalidParameterError) as exc:
        print(f"snsim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailureError as exc:
        print(f"snsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"snsim: i/o error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
