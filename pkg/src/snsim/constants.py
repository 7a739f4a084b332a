"""Physical constants used throughout snsim.

CODATA 2018 recommended values, pinned here rather than imported from
scipy.constants so the scale factors derived from them are bit-stable
across library versions.
"""

# Newtonian constant of gravitation, m^3 kg^-1 s^-2
G = 6.67430e-11

# Reduced Planck constant, J s (h = 6.62607015e-34 exact, / 2 pi)
HBAR = 1.054571817e-34

# Atomic mass constant, kg
ATOMIC_MASS_KG = 1.66053906660e-27
