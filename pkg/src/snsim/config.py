"""Run configuration: flat key = value files, CLI overrides, validation.

The resolved configuration is what the manifest records; it contains every
number needed to recompute any output table. Config files hold one
`key = value` per line with `#` comments; keys match the dataclass fields
below (CLI flags use the same names with dashes).
"""

import math
import os
from dataclasses import dataclass, fields, replace

from .errors import ConfigurationError
from .lattice import Lattice, SetupParams, make_lattice
from .propagator import StepScheme

MODES = ("single", "sweep", "compare", "feasibility")

DEFAULT_SNAPSHOTS = (0.0, 2.0, 4.0, 6.0, 8.0, 8.9, 10.0)
DEFAULT_SWEEP_MASSES = (0.2, 0.3, 0.4, 0.5, 0.6)
DEFAULT_FEASIBILITY_MASSES_U = (16e9, 1e8)


@dataclass
class RunConfig:
    """Everything one invocation needs; defaults reproduce the reference setup.

    In feasibility mode `masses` is interpreted in atomic mass units; in
    sweep mode it lists dimensionless m_tilde values. `seed` is reserved:
    the simulation is deterministic and uses no randomness.
    """

    mode: str = "single"
    # grid
    x_min: float = -70.0
    x_max: float = 70.0
    n_points: int = 2001
    t_final: float = 10.0
    n_steps: int = 1000
    # physics
    d: float = 6.0
    sigma: float = 2.0
    m_tilde: float = 0.5
    epsilon: float = 0.01
    gravity: str = "on"
    coupling: float = 1.0
    # stepping
    scheme: str = "frozen"
    picard_iterations: int = 2
    boundary_guard: float = 1e-2
    # analysis
    snapshots: tuple = None
    t_eval: float = 8.9
    masses: tuple = None
    min_prominence: float = 0.05
    # feasibility targets
    target_m_tilde: float = 0.5
    target_t_tilde: float = 8.0
    # execution / output
    outdir: str = "snsim-out"
    jobs: int = 0
    emit_potential: bool = False
    emit_plot_script: bool = False
    figures: bool = True
    seed: int = 0

    def gravity_on(self) -> bool:
        return self.gravity == "on"

    def lattice(self) -> Lattice:
        return make_lattice(self.x_min, self.x_max, self.n_points,
                            self.t_final, self.n_steps)

    def setup_params(self, m_tilde: float = None, gravity_on: bool = None) -> SetupParams:
        return SetupParams(
            m_tilde=self.m_tilde if m_tilde is None else m_tilde,
            d=self.d,
            sigma=self.sigma,
            epsilon=self.epsilon,
            gravity_on=self.gravity_on() if gravity_on is None else gravity_on,
            coupling=self.coupling,
        )

    def step_scheme(self) -> StepScheme:
        return StepScheme(mode=self.scheme, picard_iterations=self.picard_iterations)

    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)


_BOOL_WORDS = {"true": True, "1": True, "yes": True, "on": True,
               "false": False, "0": False, "no": False, "off": False}


def _parse_value(name: str, text: str, target_type):
    text = text.strip()
    if target_type is bool:
        if text.lower() not in _BOOL_WORDS:
            raise ConfigurationError(f"{name}: expected a boolean, got {text!r}")
        return _BOOL_WORDS[text.lower()]
    if target_type is int:
        return int(text)
    if target_type is float:
        return float(text)
    if target_type is tuple:
        if not text:
            return ()
        return tuple(float(tok) for tok in text.split(","))
    return text


# concrete python type per config key (the dataclass stores some as None)
_FIELD_TYPES = {
    "mode": str, "x_min": float, "x_max": float, "n_points": int,
    "t_final": float, "n_steps": int, "d": float, "sigma": float,
    "m_tilde": float, "epsilon": float, "gravity": str, "coupling": float,
    "scheme": str, "picard_iterations": int, "boundary_guard": float,
    "snapshots": tuple, "t_eval": float, "masses": tuple,
    "min_prominence": float, "target_m_tilde": float, "target_t_tilde": float,
    "outdir": str, "jobs": int, "emit_potential": bool,
    "emit_plot_script": bool, "figures": bool, "seed": int,
}


def load_config_file(path: str, base: RunConfig = None) -> RunConfig:
    """Parse a flat key = value file on top of `base` (or the defaults)."""
    cfg = base if base is not None else RunConfig()
    overrides = {}
    problems = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                problems.append(f"line {lineno}: expected 'key = value', got {line!r}")
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _FIELD_TYPES:
                problems.append(f"line {lineno}: unknown key {key!r}")
                continue
            try:
                overrides[key] = _parse_value(key, value, _FIELD_TYPES[key])
            except (ValueError, ConfigurationError) as exc:
                problems.append(f"line {lineno}: {exc}")
    if problems:
        raise ConfigurationError("config file errors:\n  " + "\n  ".join(problems))
    return replace(cfg, **overrides)


def resolve(cfg: RunConfig) -> RunConfig:
    """Fill mode-dependent defaults and validate everything at once.

    Raises ConfigurationError listing every violated precondition.
    """
    problems = []
    if cfg.mode not in MODES:
        problems.append(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.gravity not in ("on", "off"):
        problems.append(f"gravity must be 'on' or 'off', got {cfg.gravity!r}")
    if cfg.scheme not in ("frozen", "pc", "frozen-potential", "predictor-corrector"):
        problems.append(f"scheme must be 'frozen' or 'pc', got {cfg.scheme!r}")

    if cfg.snapshots is None:
        snaps = [t for t in DEFAULT_SNAPSHOTS if t <= cfg.t_final + 1e-12]
    else:
        snaps = list(cfg.snapshots)
    if cfg.mode in ("compare", "sweep") and not any(
        abs(t - cfg.t_eval) < 1e-9 for t in snaps
    ):
        snaps.append(cfg.t_eval)
    snaps = tuple(sorted(snaps))

    if cfg.masses is None:
        masses = (DEFAULT_FEASIBILITY_MASSES_U if cfg.mode == "feasibility"
                  else DEFAULT_SWEEP_MASSES)
    else:
        masses = tuple(cfg.masses)

    cfg = replace(cfg, snapshots=snaps, masses=masses,
                  scheme={"frozen-potential": "frozen",
                          "predictor-corrector": "pc"}.get(cfg.scheme, cfg.scheme))

    def positive(name):
        val = getattr(cfg, name)
        if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
            problems.append(f"{name} must be positive and finite, got {val!r}")

    for name in ("t_final", "d", "sigma", "m_tilde", "epsilon",
                 "boundary_guard", "t_eval", "target_m_tilde", "target_t_tilde"):
        positive(name)
    if not cfg.x_min < cfg.x_max:
        problems.append(f"need x_min < x_max, got [{cfg.x_min}, {cfg.x_max}]")
    if cfg.n_points < 3:
        problems.append(f"n_points must be >= 3, got {cfg.n_points}")
    if cfg.n_steps < 1:
        problems.append(f"n_steps must be >= 1, got {cfg.n_steps}")
    if cfg.coupling < 0 or not math.isfinite(cfg.coupling):
        problems.append(f"coupling must be >= 0, got {cfg.coupling}")
    if not 1 <= cfg.picard_iterations <= 8:
        problems.append(f"picard_iterations must be in [1, 8], got {cfg.picard_iterations}")
    if not 0.0 < cfg.min_prominence < 1.0:
        problems.append(f"min_prominence must be in (0, 1), got {cfg.min_prominence}")
    if cfg.jobs < 0:
        problems.append(f"jobs must be >= 0, got {cfg.jobs}")
    if cfg.mode != "feasibility":
        if cfg.d + 3.0 * cfg.sigma >= cfg.x_max:
            problems.append(
                f"packets at +-{cfg.d} with width {cfg.sigma} overflow the domain "
                f"[{cfg.x_min}, {cfg.x_max}]"
            )
        for t in cfg.snapshots:
            if t < 0 or t > cfg.t_final + 1e-12:
                problems.append(f"snapshot time {t} outside [0, {cfg.t_final}]")
        if cfg.mode in ("compare", "sweep") and cfg.t_eval > cfg.t_final:
            problems.append(f"t_eval {cfg.t_eval} exceeds t_final {cfg.t_final}")
    for m in cfg.masses:
        if m <= 0 or not math.isfinite(m):
            problems.append(f"masses entries must be positive, got {m}")

    if problems:
        raise ConfigurationError(
            "invalid configuration:\n  " + "\n  ".join(problems)
        )
    return cfg


def to_manifest_dict(cfg: RunConfig) -> dict:
    """Flat, ordered mapping of the resolved configuration for the manifest."""
    out = {}
    for f in fields(RunConfig):
        val = getattr(cfg, f.name)
        if isinstance(val, tuple):
            val = ",".join(f"{v:.17g}" for v in val)
        elif isinstance(val, bool):
            val = "true" if val else "false"
        elif isinstance(val, float):
            val = f"{val:.17g}"
        out[f.name] = str(val)
    return out
