"""Spatial grid, wave state, and the two-Gaussian initial condition.

The default grid mirrors the reference setup: x in [-70, 70] split into 2000
intervals (2001 nodes, dx = 0.07) and 1000 time steps over t in [0, 10]
(dt = 0.01). All quantities are dimensionless; see snsim.units for the map
back to SI.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidParameterError


@dataclass(frozen=True)
class Lattice:
    """Uniform 1D grid with its time-step metadata."""

    x_min: float
    x_max: float
    n_points: int
    dx: float
    dt: float
    n_steps: int

    @property
    def x(self) -> np.ndarray:
        """Node positions x_i = x_min + i dx."""
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def t_final(self) -> float:
        return self.dt * self.n_steps


@dataclass
class WaveState:
    """Complex amplitudes on the lattice nodes at dimensionless time t_tilde."""

    psi: np.ndarray
    t_tilde: float = 0.0

    def density(self) -> np.ndarray:
        """|psi|^2 per node."""
        return np.abs(self.psi) ** 2


@dataclass(frozen=True)
class SetupParams:
    """Physical parameters of the double-slit state and its self-gravity.

    d and sigma are the half slit separation and Gaussian width in units of
    sigma_r; epsilon regularizes the 1/|x-x'| kernel. coupling multiplies
    the m_tilde^2 self-gravity prefactor (1.0 physical, 0.0 turns the
    nonlinearity off without touching the kinetic mass).
    """

    m_tilde: float
    d: float = 6.0
    sigma: float = 2.0
    epsilon: float = 0.01
    gravity_on: bool = True
    coupling: float = 1.0

    def __post_init__(self):
        for name in ("m_tilde", "d", "sigma", "epsilon"):
            val = getattr(self, name)
            if not math.isfinite(val) or val <= 0:
                raise InvalidParameterError(f"{name} must be positive, got {val!r}")
        if not math.isfinite(self.coupling) or self.coupling < 0:
            raise InvalidParameterError(f"coupling must be >= 0, got {self.coupling!r}")


def make_lattice(
    x_min: float, x_max: float, n_points: int, t_final: float, n_steps: int
) -> Lattice:
    """Build a uniform grid; (-70, 70, 2001, 10, 1000) gives dx=0.07, dt=0.01."""
    if not (x_min < x_max):
        raise InvalidParameterError(f"need x_min < x_max, got [{x_min}, {x_max}]")
    if n_points < 3:
        raise InvalidParameterError(f"n_points must be >= 3, got {n_points}")
    if n_steps < 1:
        raise InvalidParameterError(f"n_steps must be >= 1, got {n_steps}")
    if not (math.isfinite(t_final) and t_final > 0):
        raise InvalidParameterError(f"t_final must be positive, got {t_final!r}")
    dx = (x_max - x_min) / (n_points - 1)
    dt = t_final / n_steps
    return Lattice(
        x_min=float(x_min), x_max=float(x_max), n_points=int(n_points),
        dx=dx, dt=dt, n_steps=int(n_steps),
    )


def discrete_norm(state: WaveState, lattice: Lattice) -> float:
    """Rectangle-rule norm sum_i |psi_i|^2 dx."""
    if len(state.psi) != lattice.n_points:
        raise InvalidParameterError(
            f"state has {len(state.psi)} nodes, lattice has {lattice.n_points}"
        )
    return float(np.sum(np.abs(state.psi) ** 2) * lattice.dx)


def double_gaussian_amplitude(d: float, sigma: float) -> float:
    """Continuum normalization constant for exp(-(x-d)^2/2s^2) + exp(-(x+d)^2/2s^2).

    The cross term contributes the exp(-d^2/sigma^2) correction; for the
    default d=6, sigma=2 it shifts A by about 6e-5 relative.
    """
    return (2.0 * sigma * math.sqrt(math.pi) * (1.0 + math.exp(-(d / sigma) ** 2))) ** -0.5


def prepare_double_gaussian(lattice: Lattice, params: SetupParams) -> WaveState:
    """Sample the symmetric two-Gaussian state and normalize it on the grid.

    The state is real and even; normalization is enforced numerically after
    sampling so the discrete norm is exactly 1 regardless of grid spacing.
    """
    if params.d + 3.0 * params.sigma >= lattice.x_max:
        raise ConfigurationError(
            f"packets at +-{params.d} with width {params.sigma} overflow the domain "
            f"[{lattice.x_min}, {lattice.x_max}]; need d + 3 sigma < x_max"
        )
    x = lattice.x
    psi = np.exp(-((x - params.d) ** 2) / (2.0 * params.sigma**2)) + np.exp(
        -((x + params.d) ** 2) / (2.0 * params.sigma**2)
    )
    if lattice.x_min == -lattice.x_max:
        # mirror the left half so parity is bit-exact despite x_i rounding
        half = lattice.n_points // 2
        psi[lattice.n_points - half:] = psi[:half][::-1]
    psi = psi.astype(np.complex128)
    norm = math.sqrt(float(np.sum(np.abs(psi) ** 2)) * lattice.dx)
    psi /= norm
    return WaveState(psi=psi, t_tilde=0.0)
