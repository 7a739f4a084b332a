"""Self-gravity potential sourced by the instantaneous probability density.

The regularized 1D kernel is

    V(x) = -c m^2 * integral |psi(x')|^2 / sqrt((x - x')^2 + eps^2) dx',

discretized with the same rectangle rule as the norm (the j = i self-term
is included; the regularization keeps it finite at -|psi_i|^2 dx / eps).
Two evaluation routes are provided: an O(N^2) direct summation, which is
the correctness oracle, and an FFT linear convolution (zero-padded to at
least 2N-1 samples so nothing wraps around) that is the default on grids
of 512 nodes or more.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import InvalidParameterError
from .lattice import Lattice, WaveState

# grids at least this large use the FFT route by default
FAST_PATH_MIN_POINTS = 512


@dataclass
class PotentialField:
    """Real potential samples on the lattice nodes."""

    values: np.ndarray
    built_from_time: float = 0.0


def _check_args(state: WaveState, lattice: Lattice, m_tilde: float, epsilon: float):
    if epsilon <= 0:
        raise InvalidParameterError(
            f"epsilon must be > 0 (the bare 1/|x-x'| kernel is singular), got {epsilon!r}"
        )
    if m_tilde < 0:
        raise InvalidParameterError(f"m_tilde must be >= 0, got {m_tilde!r}")
    if len(state.psi) != lattice.n_points:
        raise InvalidParameterError(
            f"state has {len(state.psi)} nodes, lattice has {lattice.n_points}"
        )


def potential_from_density(
    density: np.ndarray, lattice: Lattice, m_tilde: float, epsilon: float,
    coupling: float = 1.0, method: str = "auto",
) -> np.ndarray:
    """Potential values for an arbitrary density array (not tied to a state)."""
    if method == "auto":
        method = "fast" if lattice.n_points >= FAST_PATH_MIN_POINTS else "direct"
    weights = np.asarray(density, dtype=float) * lattice.dx
    if method == "direct":
        x = lattice.x
        kernel = 1.0 / np.sqrt((x[:, None] - x[None, :]) ** 2 + epsilon**2)
        conv = kernel @ weights
    elif method == "fast":
        n = lattice.n_points
        kernel_hat, n_fft = _kernel_rfft(n, lattice.dx, epsilon)
        full = scipy.fft.irfft(scipy.fft.rfft(weights, n_fft) * kernel_hat, n_fft)
        # full convolution index i + (n-1) holds sum_j w_j k(x_i - x_j)
        conv = full[n - 1 : 2 * n - 1]
    else:
        raise InvalidParameterError(f"unknown potential method {method!r}")
    return -coupling * m_tilde**2 * conv


def self_potential_direct(
    state: WaveState, lattice: Lattice, m_tilde: float, epsilon: float,
    coupling: float = 1.0,
) -> PotentialField:
    """O(N^2) summation V_i = -c m^2 sum_j |psi_j|^2 dx / sqrt((x_i-x_j)^2 + eps^2)."""
    _check_args(state, lattice, m_tilde, epsilon)
    values = potential_from_density(
        state.density(), lattice, m_tilde, epsilon, coupling, method="direct"
    )
    return PotentialField(values=values, built_from_time=state.t_tilde)


@lru_cache(maxsize=8)
def _kernel_rfft(n_points: int, dx: float, epsilon: float):
    """rfft of the sampled kernel 1/sqrt(u^2+eps^2) on the zero-padded lane."""
    offsets = np.arange(-(n_points - 1), n_points) * dx
    kernel = 1.0 / np.sqrt(offsets**2 + epsilon**2)
    n_fft = scipy.fft.next_fast_len(2 * n_points - 1, real=True)
    return scipy.fft.rfft(kernel, n_fft), n_fft


def self_potential_fast(
    state: WaveState, lattice: Lattice, m_tilde: float, epsilon: float,
    coupling: float = 1.0,
) -> PotentialField:
    """FFT linear convolution with the same contract as self_potential_direct."""
    _check_args(state, lattice, m_tilde, epsilon)
    values = potential_from_density(
        state.density(), lattice, m_tilde, epsilon, coupling, method="fast"
    )
    return PotentialField(values=values, built_from_time=state.t_tilde)


def self_potential(
    state: WaveState, lattice: Lattice, m_tilde: float, epsilon: float,
    coupling: float = 1.0, method: str = "auto",
) -> PotentialField:
    """Route to the direct or FFT evaluation; 'auto' picks FFT for N >= 512."""
    if method == "auto":
        method = "fast" if lattice.n_points >= FAST_PATH_MIN_POINTS else "direct"
    if method == "fast":
        return self_potential_fast(state, lattice, m_tilde, epsilon, coupling)
    if method == "direct":
        return self_potential_direct(state, lattice, m_tilde, epsilon, coupling)
    raise InvalidParameterError(f"unknown potential method {method!r}")


def potential_energy(state: WaveState, potential: PotentialField, lattice: Lattice) -> float:
    """Self-interaction energy (1/2) sum_i V_i |psi_i|^2 dx.

    The 1/2 compensates for each pair of density elements being counted in
    both V_i and V_j.
    """
    return 0.5 * float(np.sum(potential.values * state.density()) * lattice.dx)
