"""Closed-form references for the gravity-free evolution.

A Gaussian of width sigma spreads under the free Schrodinger flow with the
complex width law sigma^2 -> sigma^2 (1 + i t / (m sigma^2)); the two-packet
superposition therefore has an exact solution that validates the integrator,
and its interference phase fixes the ideal fringe spacing

    w(t) = pi (m sigma^4 + t^2 / m) / (d t),

which tends to pi t / (m d) (the dimensionless h t / 2 m d) for t >> m sigma^2.
Note w describes the phase of the cross term; the actual density maxima sit
a few percent inside it because the Gaussian envelope decays outward (the
pull is ~ 4 (sigma/d)^2 relative for well-separated slits). measured peaks
should be compared against brute-force peak finding on this oracle density,
not against w alone.
"""

import numpy as np

from .errors import InvalidParameterError
from .lattice import SetupParams, double_gaussian_amplitude


def free_double_gaussian(x, t_tilde: float, params: SetupParams) -> np.ndarray:
    """Exact free evolution of the normalized two-Gaussian state at time t_tilde."""
    if t_tilde < 0:
        raise InvalidParameterError(f"t_tilde must be >= 0, got {t_tilde}")
    x = np.asarray(x, dtype=float)
    d, sigma, m = params.d, params.sigma, params.m_tilde
    z = 1.0 + 1j * t_tilde / (m * sigma**2)
    amp = double_gaussian_amplitude(d, sigma) / np.sqrt(z)
    return amp * (
        np.exp(-((x - d) ** 2) / (2.0 * sigma**2 * z))
        + np.exp(-((x + d) ** 2) / (2.0 * sigma**2 * z))
    )


def free_fringe_spacing(t_tilde: float, params: SetupParams) -> float:
    """Ideal interference-phase fringe spacing at time t_tilde (see module docs)."""
    if t_tilde <= 0:
        raise InvalidParameterError(f"t_tilde must be > 0, got {t_tilde}")
    d, sigma, m = params.d, params.sigma, params.m_tilde
    return np.pi * (m * sigma**4 + t_tilde**2 / m) / (d * t_tilde)


def free_packet_width(t_tilde: float, params: SetupParams) -> float:
    """Spread law sigma(t) = sigma sqrt(1 + (t/(m sigma^2))^2) of one packet."""
    sigma, m = params.sigma, params.m_tilde
    return sigma * np.sqrt(1.0 + (t_tilde / (m * sigma**2)) ** 2)
