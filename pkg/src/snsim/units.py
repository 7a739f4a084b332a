"""Nondimensionalization scales and experimental-feasibility arithmetic.

A choice of length scale sigma_r fixes the companion time and mass scales

    t_r = (sigma_r^5 / (G hbar))^(1/3),    m_r = (hbar^2 / (G sigma_r))^(1/3),

after which the self-gravitating Schrodinger dynamics depends on the single
dimensionless parameter m_tilde = m / m_r. The feasibility calculator runs
the map in reverse: given a particle mass and a target (m_tilde, t_tilde) it
returns the length scale, slit separation and physical evolution time an
experiment would need.
"""

import math
from dataclasses import dataclass

from .constants import ATOMIC_MASS_KG, G, HBAR
from .errors import InvalidParameterError

_DIMENSIONS = ("length", "time", "mass")


def u_to_kg(mass_u: float) -> float:
    """Convert a mass from atomic mass units to kilograms."""
    return mass_u * ATOMIC_MASS_KG


def kg_to_u(mass_kg: float) -> float:
    """Convert a mass from kilograms to atomic mass units."""
    return mass_kg / ATOMIC_MASS_KG


@dataclass(frozen=True)
class ScaleSystem:
    """The (sigma_r, t_r, m_r) scale triple plus the constants that fixed it."""

    sigma_r: float  # m
    t_r: float      # s
    m_r: float      # kg
    G: float = G
    hbar: float = HBAR

    @property
    def m_r_u(self) -> float:
        """Mass scale in atomic mass units."""
        return kg_to_u(self.m_r)

    def _scale_for(self, dimension: str) -> float:
        if dimension not in _DIMENSIONS:
            raise InvalidParameterError(
                f"unknown dimension {dimension!r}; expected one of {_DIMENSIONS}"
            )
        return {"length": self.sigma_r, "time": self.t_r, "mass": self.m_r}[dimension]


def make_scale_system(sigma_r: float) -> ScaleSystem:
    """Build the scale triple from a length scale sigma_r in meters."""
    if not (isinstance(sigma_r, (int, float)) and math.isfinite(sigma_r)) or sigma_r <= 0:
        raise InvalidParameterError(f"sigma_r must be positive and finite, got {sigma_r!r}")
    t_r = (sigma_r**5 / (G * HBAR)) ** (1.0 / 3.0)
    m_r = (HBAR**2 / (G * sigma_r)) ** (1.0 / 3.0)
    return ScaleSystem(sigma_r=float(sigma_r), t_r=t_r, m_r=m_r)


def to_dimensionless(value: float, dimension: str, scale: ScaleSystem) -> float:
    """SI value -> dimensionless number, for dimension in {length, time, mass}."""
    return value / scale._scale_for(dimension)


def to_si(value: float, dimension: str, scale: ScaleSystem) -> float:
    """Dimensionless number -> SI value, for dimension in {length, time, mass}."""
    return value * scale._scale_for(dimension)


@dataclass(frozen=True)
class FeasibilityReport:
    """Experimental requirements for seeing self-gravity at (m_tilde, t_tilde)."""

    mass_kg: float
    target_m_tilde: float
    target_t_tilde: float
    sigma_r: float            # m
    slit_separation: float    # m, = 2 d = 12 sigma_r for the d = 6 sigma_r setup
    evolution_time: float     # s
    scale: ScaleSystem

    @property
    def mass_u(self) -> float:
        return kg_to_u(self.mass_kg)


def feasibility_report(
    mass_kg: float, target_m_tilde: float, target_t_tilde: float
) -> FeasibilityReport:
    """Invert the scale relations: which sigma_r makes this mass sit at target_m_tilde?

    The slit separation is quoted as 12 sigma_r because the simulated setup
    places the slits at +-d with d = 6 sigma_r. The physical evolution time
    is target_t_tilde * t_r.
    """
    for name, val in (
        ("mass_kg", mass_kg),
        ("target_m_tilde", target_m_tilde),
        ("target_t_tilde", target_t_tilde),
    ):
        if not (isinstance(val, (int, float)) and math.isfinite(val)) or val <= 0:
            raise InvalidParameterError(f"{name} must be positive and finite, got {val!r}")
    m_r_needed = mass_kg / target_m_tilde
    sigma_r = HBAR**2 / (G * m_r_needed**3)
    scale = make_scale_system(sigma_r)
    return FeasibilityReport(
        mass_kg=float(mass_kg),
        target_m_tilde=float(target_m_tilde),
        target_t_tilde=float(target_t_tilde),
        sigma_r=sigma_r,
        slit_separation=12.0 * sigma_r,
        evolution_time=target_t_tilde * scale.t_r,
        scale=scale,
    )
