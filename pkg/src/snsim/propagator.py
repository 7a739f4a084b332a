"""Crank-Nicolson time stepping for the self-gravitating Schrodinger flow.

Each step solves the Cayley system

    (1 + i dt/2 H) psi^{n+1} = (1 - i dt/2 H) psi^n,
    H = -(1/2m) D2 + diag(V),

with D2 the 3-point Laplacian and homogeneous Dirichlet values beyond both
end nodes. H is Hermitian for any (real) frozen V, so every step is unitary
to solver round-off regardless of how V was obtained.

The nonlinear coupling is selectable:

  frozen  - V built from psi^n is held for the whole step. Norm-exact;
            the potential lags the state by half a step.
  pc      - Picard refinement toward the midpoint potential: V is rebuilt
            from the average of |psi^n|^2 and the trial |psi^{n+1}|^2,
            repeated picard_iterations times. Still norm-exact (the final
            application is one Cayley step with a fixed V) and much better
            at conserving the total energy.

Evolution aborts with BoundaryReflectionError as soon as the amplitude in
the outermost few nodes crosses the guard threshold, before reflections can
contaminate the interior solution. The window is several nodes wide because
the Dirichlet wall pins a standing-wave node at the boundary itself: during
a reflection the wall node stays small (~ k dx times the incident
amplitude) while the nodes just inside light up.
"""

from dataclasses import dataclass

import numpy as np

from . import tridiag
from .errors import (
    BoundaryReflectionError,
    InvalidParameterError,
    NumericalFailureError,
)
from .lattice import Lattice, SetupParams, WaveState, discrete_norm
from .potential import PotentialField, potential_from_density, potential_energy

_MODE_ALIASES = {
    "frozen": "frozen",
    "frozen-potential": "frozen",
    "pc": "pc",
    "predictor-corrector": "pc",
}

# nodes per side monitored by the boundary guard (see module docstring)
GUARD_WINDOW = 4


@dataclass(frozen=True)
class StepScheme:
    """Nonlinear-coupling strategy for one CN step."""

    mode: str = "frozen"
    picard_iterations: int = 2

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode)
        if mode is None:
            raise InvalidParameterError(
                f"mode must be 'frozen' or 'pc', got {self.mode!r}"
            )
        object.__setattr__(self, "mode", mode)
        if not 1 <= self.picard_iterations <= 8:
            raise InvalidParameterError(
                f"picard_iterations must be in [1, 8], got {self.picard_iterations}"
            )


@dataclass
class RunRecord:
    """Everything a finished run exposes: snapshots plus per-step series."""

    params: SetupParams
    lattice: Lattice
    scheme: StepScheme
    snapshot_times: np.ndarray
    snapshot_psis: list
    snapshot_potentials: list | None
    times: np.ndarray
    norms: np.ndarray
    kinetic_series: np.ndarray
    potential_series: np.ndarray

    @property
    def total_energy(self) -> np.ndarray:
        return self.kinetic_series + self.potential_series

    def snapshot_densities(self) -> list:
        return [np.abs(psi) ** 2 for psi in self.snapshot_psis]

    def snapshot_index(self, t_tilde: float) -> int:
        """Index of the snapshot taken at t_tilde (within half a step)."""
        hits = np.where(np.abs(self.snapshot_times - t_tilde) <= 0.5 * self.lattice.dt)[0]
        if len(hits) == 0:
            raise InvalidParameterError(
                f"no snapshot at t={t_tilde}; have {self.snapshot_times}"
            )
        return int(hits[0])

    def density_at(self, t_tilde: float) -> np.ndarray:
        return np.abs(self.snapshot_psis[self.snapshot_index(t_tilde)]) ** 2


def cn_step(
    state: WaveState,
    potential: PotentialField,
    lattice: Lattice,
    m_tilde: float,
    solver: str = "banded",
) -> WaveState:
    """Advance one Crank-Nicolson step under the given (frozen) potential."""
    if m_tilde <= 0:
        raise InvalidParameterError(f"m_tilde must be > 0, got {m_tilde!r}")
    v = potential.values
    if len(v) != lattice.n_points or len(state.psi) != lattice.n_points:
        raise InvalidParameterError("state/potential length does not match lattice")
    dt, dx = lattice.dt, lattice.dx
    kin = 1.0 / (m_tilde * dx**2)            # diagonal of -(1/2m) D2
    h_off = -0.5 * kin                        # off-diagonal of -(1/2m) D2
    half = 0.5j * dt

    diag_a = 1.0 + half * (kin + v)
    off_a = np.full(lattice.n_points, half * h_off)
    psi = state.psi
    # rhs = (1 - i dt/2 H) psi with Dirichlet ghosts
    rhs = (1.0 - half * (kin + v)) * psi
    rhs[:-1] -= half * h_off * psi[1:]
    rhs[1:] -= half * h_off * psi[:-1]

    if solver == "banded":
        new_psi = tridiag.solve(off_a, diag_a, off_a, rhs)
    elif solver == "thomas":
        new_psi = tridiag.thomas(off_a, diag_a, off_a, rhs)
    else:
        raise InvalidParameterError(f"unknown solver {solver!r}")
    return WaveState(psi=new_psi, t_tilde=state.t_tilde + dt)


def kinetic_energy(state: WaveState, lattice: Lattice, m_tilde: float) -> float:
    """Forward-difference gradient energy (1/2m) sum |(psi_{i+1}-psi_i)/dx|^2 dx."""
    grad = np.diff(state.psi) / lattice.dx
    return 0.5 / m_tilde * float(np.sum(np.abs(grad) ** 2) * lattice.dx)


def _snap_steps(snapshot_times, lattice: Lattice) -> dict:
    """Map requested times to step indices (nearest step; must lie in range)."""
    steps = {}
    for t in snapshot_times:
        if t < -0.5 * lattice.dt or t > lattice.t_final + 0.5 * lattice.dt:
            raise InvalidParameterError(
                f"snapshot time {t} outside [0, {lattice.t_final}]"
            )
        steps[min(lattice.n_steps, max(0, int(round(t / lattice.dt))))] = True
    return steps


def evolve(
    initial: WaveState,
    params: SetupParams,
    lattice: Lattice,
    scheme: StepScheme = StepScheme(),
    snapshot_times=(),
    boundary_guard: float = 1e-2,
    potential_method: str = "auto",
    solver: str = "banded",
) -> RunRecord:
    """Run the full time evolution, recording snapshots and per-step series.

    With params.gravity_on false the potential is identically zero (free
    Schrodinger reference run). The per-step energy uses the potential built
    from the instantaneous state, so the total is the conserved functional
    of the semi-discrete system up to time-stepping error.
    """
    snap_steps = _snap_steps(snapshot_times, lattice)
    n_steps, n_points = lattice.n_steps, lattice.n_points
    if len(initial.psi) != n_points:
        raise InvalidParameterError(
            f"initial state has {len(initial.psi)} nodes, lattice has {n_points}"
        )
    gravity = params.gravity_on

    psi = WaveState(psi=initial.psi.astype(np.complex128, copy=True),
                    t_tilde=initial.t_tilde)
    zero_v = PotentialField(values=np.zeros(n_points), built_from_time=psi.t_tilde)

    norms = np.empty(n_steps + 1)
    kin = np.empty(n_steps + 1)
    pot = np.empty(n_steps + 1)
    times = lattice.dt * np.arange(n_steps + 1)
    snap_times, snap_psis, snap_pots = [], [], []

    def build_potential(density, t):
        return PotentialField(
            values=potential_from_density(
                density, lattice, params.m_tilde, params.epsilon,
                coupling=params.coupling, method=potential_method,
            ),
            built_from_time=t,
        )

    for n in range(n_steps + 1):
        if not np.all(np.isfinite(psi.psi)):
            raise NumericalFailureError(
                f"non-finite amplitude at t={psi.t_tilde:.6g}"
            )
        w = max(1, min(GUARD_WINDOW, n_points // 4))
        edge = max(np.abs(psi.psi[:w]).max(), np.abs(psi.psi[-w:]).max())
        if edge > boundary_guard:
            raise BoundaryReflectionError(
                f"wave packet reached the domain boundary at t={psi.t_tilde:.6g} "
                f"(|psi| = {edge:.3e} within {w} nodes of the edge > guard "
                f"{boundary_guard:.3e}); enlarge the domain or shorten the run",
                t_tilde=psi.t_tilde,
            )

        v_now = build_potential(psi.density(), psi.t_tilde) if gravity else zero_v
        norms[n] = discrete_norm(psi, lattice)
        kin[n] = kinetic_energy(psi, lattice, params.m_tilde)
        pot[n] = potential_energy(psi, v_now, lattice) if gravity else 0.0
        if n in snap_steps:
            snap_times.append(times[n])
            snap_psis.append(psi.psi.copy())
            snap_pots.append(v_now.values.copy() if gravity else None)
        if n == n_steps:
            break

        v_use = v_now
        if gravity and scheme.mode == "pc":
            rho_n = psi.density()
            for _ in range(scheme.picard_iterations):
                trial = cn_step(psi, v_use, lattice, params.m_tilde, solver=solver)
                rho_mid = 0.5 * (rho_n + trial.density())
                v_use = build_potential(rho_mid, psi.t_tilde + 0.5 * lattice.dt)
        psi = cn_step(psi, v_use, lattice, params.m_tilde, solver=solver)

    return RunRecord(
        params=params,
        lattice=lattice,
        scheme=scheme,
        snapshot_times=np.array(snap_times),
        snapshot_psis=snap_psis,
        snapshot_potentials=snap_pots if gravity else None,
        times=times,
        norms=norms,
        kinetic_series=kin,
        potential_series=pot,
    )
