"""snsim: 1D Schrodinger-Newton double-slit simulator.

Numerically integrates the dimensionless self-gravitating Schrodinger
equation for a two-Gaussian (double-slit) state with a Crank-Nicolson
scheme, and extracts the interference observables (fringe width,
visibility, spread, peak attraction) that distinguish gravitational
self-interaction from decoherence.
"""

__version__ = "0.1.0"

from .analysis import (
    AttractionSeries,
    FringeMetrics,
    PeakSet,
    ScanTable,
    attraction_series,
    compute_fringe_metrics,
    find_peaks,
    fringe_width,
    fringe_width_scan,
    rms_spread,
    visibility,
)
from .errors import (
    BoundaryReflectionError,
    ConfigurationError,
    InvalidParameterError,
    NumericalFailureError,
    SnsimError,
)
from .lattice import (
    Lattice,
    SetupParams,
    WaveState,
    discrete_norm,
    make_lattice,
    prepare_double_gaussian,
)
from .oracles import free_double_gaussian, free_fringe_spacing, free_packet_width
from .potential import (
    PotentialField,
    potential_energy,
    self_potential,
    self_potential_direct,
    self_potential_fast,
)
from .propagator import RunRecord, StepScheme, cn_step, evolve, kinetic_energy
from .units import (
    FeasibilityReport,
    ScaleSystem,
    feasibility_report,
    kg_to_u,
    make_scale_system,
    to_dimensionless,
    to_si,
    u_to_kg,
)
