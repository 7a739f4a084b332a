"""Observables extracted from density snapshots.

Peaks are interior local maxima refined to sub-grid positions with a
3-point parabola and filtered by topographic prominence: the height of a
peak above the higher of the two valley floors separating it from taller
terrain (or the domain edge), measured as a fraction of the global maximum.
The fringe width w is the distance from the central peak (within one dx of
x = 0, the necessary signature of interference) to its nearest accepted
neighbor; when either peak is missing w is simply absent.

All metrics depend on the density's shape only, never its scale.
"""

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import InvalidParameterError
from .lattice import Lattice
from .propagator import RunRecord

DEFAULT_MIN_PROMINENCE = 0.05


@dataclass
class PeakSet:
    """Refined peak positions with heights and relative prominences."""

    positions: np.ndarray     # strictly increasing
    heights: np.ndarray
    prominences: np.ndarray   # in (0, 1], relative to the global maximum

    def __len__(self) -> int:
        return len(self.positions)


@dataclass
class FringeMetrics:
    """Shape observables of one snapshot; None marks an absent feature."""

    fringe_width: float | None
    visibility: float | None
    rms_spread: float
    peak_separation: float | None
    n_peaks: int


def _parabolic_refine(density: np.ndarray, i: int) -> tuple[float, float]:
    """Sub-grid offset (in units of dx) and refined height at node i."""
    ym1, y0, yp1 = density[i - 1], density[i], density[i + 1]
    denom = ym1 - 2.0 * y0 + yp1
    if denom == 0.0:
        return 0.0, y0
    delta = 0.5 * (ym1 - yp1) / denom
    return delta, y0 - 0.25 * (ym1 - yp1) * delta


def find_peaks(
    density, lattice: Lattice, min_prominence: float = DEFAULT_MIN_PROMINENCE
) -> PeakSet:
    """Locate interior density maxima with at least the requested prominence."""
    if not 0.0 < min_prominence < 1.0:
        raise InvalidParameterError(
            f"min_prominence must be in (0, 1), got {min_prominence!r}"
        )
    rho = np.asarray(density, dtype=float)
    if len(rho) != lattice.n_points:
        raise InvalidParameterError(
            f"density has {len(rho)} nodes, lattice has {lattice.n_points}"
        )
    if np.any(rho < 0):
        raise InvalidParameterError("density must be non-negative")
    global_max = rho.max()
    empty = PeakSet(np.empty(0), np.empty(0), np.empty(0))
    if global_max == 0.0:
        return empty

    raw, props = scipy.signal.find_peaks(rho, prominence=min_prominence * global_max)
    if len(raw) == 0:
        return empty

    positions, heights = [], []
    for i in raw:
        delta, height = _parabolic_refine(rho, i)
        positions.append(lattice.x_min + (i + delta) * lattice.dx)
        heights.append(height)
    return PeakSet(
        np.array(positions), np.array(heights), props["prominences"] / global_max
    )


def _central_index(peaks: PeakSet, lattice: Lattice) -> int | None:
    """Index of the peak within one dx of x = 0, if any."""
    if len(peaks) == 0:
        return None
    i = int(np.argmin(np.abs(peaks.positions)))
    return i if abs(peaks.positions[i]) <= lattice.dx else None


def fringe_width(
    density, lattice: Lattice, min_prominence: float = DEFAULT_MIN_PROMINENCE
) -> float | None:
    """Distance from the central peak to its nearest accepted maximum.

    Returns None when there is no central peak or no other peak: absence of
    the interference signature is a value, not an error.
    """
    peaks = find_peaks(density, lattice, min_prominence)
    c = _central_index(peaks, lattice)
    if c is None or len(peaks) < 2:
        return None
    others = np.delete(peaks.positions, c)
    return float(np.min(np.abs(others - peaks.positions[c])))


def rms_spread(density, lattice: Lattice) -> float:
    """sqrt(<x^2>) of the (renormalized) density."""
    rho = np.asarray(density, dtype=float)
    total = rho.sum()
    if total == 0.0:
        return 0.0
    return float(np.sqrt(np.sum(lattice.x**2 * rho) / total))


def visibility(
    density, lattice: Lattice, min_prominence: float = DEFAULT_MIN_PROMINENCE
) -> float | None:
    """(rho_max - rho_min) / (rho_max + rho_min) across the central fringe.

    The central fringe spans the central peak and its nearest accepted
    neighbor; None when that structure is absent.
    """
    rho = np.asarray(density, dtype=float)
    peaks = find_peaks(rho, lattice, min_prominence)
    c = _central_index(peaks, lattice)
    if c is None or len(peaks) < 2:
        return None
    others = np.delete(peaks.positions, c)
    nearest = others[np.argmin(np.abs(others - peaks.positions[c]))]
    lo, hi = sorted((peaks.positions[c], nearest))
    sel = (lattice.x >= lo) & (lattice.x <= hi)
    rho_max, rho_min = rho[sel].max(), rho[sel].min()
    if rho_max + rho_min == 0.0:
        return None
    return float((rho_max - rho_min) / (rho_max + rho_min))


def peak_separation(peaks: PeakSet) -> float | None:
    """Distance between the outermost accepted peaks (0 for a single peak)."""
    if len(peaks) == 0:
        return None
    return float(peaks.positions[-1] - peaks.positions[0])


def compute_fringe_metrics(
    density, lattice: Lattice, min_prominence: float = DEFAULT_MIN_PROMINENCE
) -> FringeMetrics:
    """All shape observables of one snapshot in one pass."""
    rho = np.asarray(density, dtype=float)
    peaks = find_peaks(rho, lattice, min_prominence)
    return FringeMetrics(
        fringe_width=fringe_width(rho, lattice, min_prominence),
        visibility=visibility(rho, lattice, min_prominence),
        rms_spread=rms_spread(rho, lattice),
        peak_separation=peak_separation(peaks),
        n_peaks=len(peaks),
    )


@dataclass
class ScanRow:
    """One mass point of the fringe-width scan."""

    m_tilde: float
    inv_m_tilde: float
    w_free: float | None
    w_sn: float | None
    deviation: float | None


@dataclass
class LineFit:
    """Least-squares line w = slope / m + intercept over the free points."""

    slope: float
    intercept: float
    rel_rms_residual: float


@dataclass
class ScanTable:
    """Fringe widths vs 1/m for paired free and self-gravitating runs."""

    t_eval: float
    min_prominence: float
    rows: list
    fit_through_origin: LineFit | None
    fit_with_intercept: LineFit | None


def _fit_lines(inv_m: np.ndarray, w: np.ndarray):
    """Both trend-line variants through the (1/m, w) free points."""
    if len(w) < 2:
        return None, None
    slope_o = float(np.dot(inv_m, w) / np.dot(inv_m, inv_m))
    resid_o = w - slope_o * inv_m
    fit_o = LineFit(slope_o, 0.0, float(np.sqrt(np.mean((resid_o / w) ** 2))))
    slope_i, intercept = np.polyfit(inv_m, w, 1)
    resid_i = w - (slope_i * inv_m + intercept)
    fit_i = LineFit(float(slope_i), float(intercept),
                    float(np.sqrt(np.mean((resid_i / w) ** 2))))
    return fit_o, fit_i


def fringe_width_scan(
    records: list, t_eval: float = 8.9,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
) -> ScanTable:
    """Pair gravity-off/on records by mass and tabulate fringe widths at t_eval.

    Every record must carry a snapshot at t_eval. The trend line through the
    gravity-off points is reported both through the origin and with a free
    intercept.
    """
    by_mass: dict = {}
    for rec in records:
        entry = by_mass.setdefault(rec.params.m_tilde, {})
        key = "sn" if rec.params.gravity_on else "free"
        entry[key] = rec

    rows = []
    for m in sorted(by_mass, reverse=True):  # ascending 1/m
        entry = by_mass[m]
        w_free = w_sn = None
        if "free" in entry:
            rec = entry["free"]
            w_free = fringe_width(rec.density_at(t_eval), rec.lattice, min_prominence)
        if "sn" in entry:
            rec = entry["sn"]
            w_sn = fringe_width(rec.density_at(t_eval), rec.lattice, min_prominence)
        deviation = (w_sn - w_free) if (w_sn is not None and w_free is not None) else None
        rows.append(ScanRow(m, 1.0 / m, w_free, w_sn, deviation))

    fitted = [(r.inv_m_tilde, r.w_free) for r in rows if r.w_free is not None]
    if fitted:
        inv_m, w = map(np.array, zip(*fitted))
        fit_o, fit_i = _fit_lines(inv_m, w)
    else:
        fit_o = fit_i = None
    return ScanTable(t_eval, min_prominence, rows, fit_o, fit_i)


@dataclass
class AttractionSeries:
    """Outer-peak separation and spread per snapshot, with the merge time."""

    times: np.ndarray
    separations: np.ndarray   # NaN where no peak was found
    spreads: np.ndarray
    merge_time: float | None  # first snapshot with a single surviving peak


def attraction_series(
    record: RunRecord, min_prominence: float = DEFAULT_MIN_PROMINENCE
) -> AttractionSeries:
    """Track how the two density lobes approach each other over a run."""
    if len(record.snapshot_times) < 2:
        raise InvalidParameterError("need at least 2 snapshots to track attraction")
    seps, spreads = [], []
    merge_time = None
    for t, rho in zip(record.snapshot_times, record.snapshot_densities()):
        peaks = find_peaks(rho, record.lattice, min_prominence)
        sep = peak_separation(peaks)
        seps.append(np.nan if sep is None else sep)
        spreads.append(rms_spread(rho, record.lattice))
        if merge_time is None and len(peaks) == 1:
            merge_time = float(t)
    return AttractionSeries(
        times=np.asarray(record.snapshot_times, dtype=float),
        separations=np.array(seps),
        spreads=np.array(spreads),
        merge_time=merge_time,
    )
