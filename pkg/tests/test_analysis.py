import numpy as np
import pytest

from snsim import (
    InvalidParameterError,
    SetupParams,
    StepScheme,
    attraction_series,
    compute_fringe_metrics,
    evolve,
    find_peaks,
    free_double_gaussian,
    fringe_width,
    fringe_width_scan,
    make_lattice,
    prepare_double_gaussian,
    rms_spread,
    visibility,
)
from snsim.analysis import peak_separation
from snsim.propagator import RunRecord


def record_from_densities(lattice, m_tilde, gravity_on, times, psis):
    """Synthetic RunRecord carrying given snapshot amplitudes."""
    n = lattice.n_steps + 1
    return RunRecord(
        params=SetupParams(m_tilde=m_tilde, gravity_on=gravity_on),
        lattice=lattice,
        scheme=StepScheme(),
        snapshot_times=np.asarray(times, dtype=float),
        snapshot_psis=[np.asarray(p, dtype=complex) for p in psis],
        snapshot_potentials=None,
        times=lattice.dt * np.arange(n),
        norms=np.ones(n),
        kinetic_series=np.zeros(n),
        potential_series=np.zeros(n),
    )


class TestFindPeaks:
    def test_cosine_squared_grid(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        rho = np.cos(np.pi * lat.x / 10.0) ** 2
        peaks = find_peaks(rho, lat, 0.05)
        assert len(peaks) == 3
        np.testing.assert_allclose(peaks.positions, [-10.0, 0.0, 10.0],
                                   atol=lat.dx)
        np.testing.assert_allclose(np.diff(peaks.positions), 10.0, atol=lat.dx)

    def test_single_gaussian(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        rho = np.exp(-((lat.x - 1.23) ** 2) / 2.0)
        peaks = find_peaks(rho, lat, 0.05)
        assert len(peaks) == 1
        assert peaks.positions[0] == pytest.approx(1.23, abs=lat.dx / 2)
        assert peaks.prominences[0] == pytest.approx(1.0, abs=1e-6)

    def test_initial_double_gaussian(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        state = prepare_double_gaussian(lat, SetupParams(m_tilde=0.5))
        peaks = find_peaks(state.density(), lat, 0.05)
        assert len(peaks) == 2
        # overlap pulls the maxima inward by far less than 0.05
        assert peaks.positions[0] == pytest.approx(-6.0, abs=0.05)
        assert peaks.positions[1] == pytest.approx(6.0, abs=0.05)

    def test_all_zero_density_is_empty(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        peaks = find_peaks(np.zeros(401), lat, 0.05)
        assert len(peaks) == 0

    def test_positions_strictly_increasing_and_prominences_bounded(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        rho = np.abs(free_double_gaussian(lat.x, 8.9,
                                          SetupParams(m_tilde=0.3, gravity_on=False))) ** 2
        peaks = find_peaks(rho, lat, 0.05)
        assert np.all(np.diff(peaks.positions) > 0)
        assert np.all(peaks.prominences > 0) and np.all(peaks.prominences <= 1.0)
        # even density: the outermost peaks sit at +-s/2
        assert abs(peaks.positions[0] + peaks.positions[-1]) < lat.dx

    def test_input_validation(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        with pytest.raises(InvalidParameterError):
            find_peaks(np.ones(17), lat, 0.05)
        with pytest.raises(InvalidParameterError):
            find_peaks(-np.ones(401), lat, 0.05)
        with pytest.raises(InvalidParameterError):
            find_peaks(np.ones(401), lat, 1.5)


class TestFringeWidth:
    @pytest.mark.parametrize("k", [0.1, 0.2, 0.5])
    def test_enveloped_cosine_squared(self, k):
        lat = make_lattice(-200, 200, 4001, 1, 10)
        rho = np.cos(k * lat.x) ** 2 * np.exp(-(lat.x**2) / 250.0**2)
        w = fringe_width(rho, lat, 0.05)
        assert w == pytest.approx(np.pi / k, abs=lat.dx)

    def test_absent_without_central_peak(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        state = prepare_double_gaussian(lat, SetupParams(m_tilde=0.5))
        assert fringe_width(state.density(), lat) is None

    def test_absent_without_side_peak(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        rho = np.exp(-(lat.x**2) / 2.0)
        assert fringe_width(rho, lat) is None

    def test_side_peaks_equidistant_for_even_density(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        params = SetupParams(m_tilde=0.3, gravity_on=False)
        rho = np.abs(free_double_gaussian(lat.x, 8.9, params)) ** 2
        peaks = find_peaks(rho, lat, 0.05)
        central = peaks.positions[np.argmin(np.abs(peaks.positions))]
        left = peaks.positions[peaks.positions < central - lat.dx]
        right = peaks.positions[peaks.positions > central + lat.dx]
        w_left = central - left.max()
        w_right = right.min() - central
        assert abs(w_left - w_right) < lat.dx

    def test_matches_brute_force_oracle_peaks(self):
        # frozen from brute-force peak finding on the exact density
        # (see tests/test_oracles.py): first side maximum at 21.209 for
        # m = 0.2 at t = 8.9
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        params = SetupParams(m_tilde=0.2, gravity_on=False)
        rho = np.abs(free_double_gaussian(lat.x, 8.9, params)) ** 2
        assert fringe_width(rho, lat) == pytest.approx(21.209, abs=0.02)


class TestShapeMetrics:
    def test_metrics_are_scale_invariant(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        params = SetupParams(m_tilde=0.3, gravity_on=False)
        rho = np.abs(free_double_gaussian(lat.x, 8.9, params)) ** 2
        a = compute_fringe_metrics(rho, lat)
        b = compute_fringe_metrics(7.3 * rho, lat)
        assert b.fringe_width == pytest.approx(a.fringe_width, rel=1e-12)
        assert b.visibility == pytest.approx(a.visibility, rel=1e-12)
        assert b.rms_spread == pytest.approx(a.rms_spread, rel=1e-12)
        assert b.peak_separation == pytest.approx(a.peak_separation, rel=1e-12)
        assert b.n_peaks == a.n_peaks

    def test_visibility_of_clean_interference(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        params = SetupParams(m_tilde=0.2, gravity_on=False)
        rho = np.abs(free_double_gaussian(lat.x, 8.9, params)) ** 2
        v = visibility(rho, lat)
        assert v is not None and 0.8 < v <= 1.0

    def test_visibility_absent_without_fringes(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        assert visibility(np.exp(-(lat.x**2)), lat) is None

    def test_rms_spread_of_gaussian(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        rho = np.exp(-(lat.x**2) / 4.0)   # variance 2 -> rms sqrt(2)
        assert rms_spread(rho, lat) == pytest.approx(np.sqrt(2.0), rel=1e-6)
        assert rms_spread(np.zeros(2001), lat) == 0.0


@pytest.fixture(scope="module")
def oracle_records():
    # free records use the exact density; "self-gravity" stand-ins use a
    # slightly heavier effective mass so their fringes are narrower
    lat = make_lattice(-70, 70, 2001, 10, 1000)
    records = []
    for m in (0.2, 0.3, 0.4):
        free = SetupParams(m_tilde=m, gravity_on=False)
        proxy = SetupParams(m_tilde=1.1 * m, gravity_on=False)
        records.append(record_from_densities(
            lat, m, False, [8.9],
            [free_double_gaussian(lat.x, 8.9, free)]))
        records.append(record_from_densities(
            lat, m, True, [8.9],
            [free_double_gaussian(lat.x, 8.9, proxy)]))
    return records


class TestScan:

    def test_rows_and_deviations(self, oracle_records):
        table = fringe_width_scan(oracle_records, 8.9)
        assert [r.m_tilde for r in table.rows] == [0.4, 0.3, 0.2]
        assert all(r.inv_m_tilde == pytest.approx(1.0 / r.m_tilde) for r in table.rows)
        for row in table.rows:
            assert row.w_free is not None and row.w_sn is not None
            assert row.deviation == pytest.approx(row.w_sn - row.w_free)
            assert row.deviation < 0  # heavier proxy means narrower fringes

    def test_free_points_fit_a_line(self, oracle_records):
        table = fringe_width_scan(oracle_records, 8.9)
        assert table.fit_with_intercept.rel_rms_residual < 0.03
        assert table.fit_through_origin.intercept == 0.0
        assert table.fit_with_intercept.slope > 0

    def test_missing_snapshot_is_an_error(self, oracle_records):
        with pytest.raises(InvalidParameterError):
            fringe_width_scan(oracle_records, t_eval=7.7)


class TestAttraction:
    def test_initial_separation_is_slit_distance(self):
        lat = make_lattice(-70, 70, 2001, 10, 1000)
        params = SetupParams(m_tilde=0.5)
        state = prepare_double_gaussian(lat, params)
        rec = record_from_densities(lat, 0.5, True, [0.0, 0.01],
                                    [state.psi, state.psi])
        series = attraction_series(rec)
        assert series.separations[0] == pytest.approx(12.0, abs=lat.dx)
        assert series.merge_time is None

    def test_free_spread_is_nondecreasing(self):
        lat = make_lattice(-70, 70, 2001, 8, 800)
        params = SetupParams(m_tilde=0.3, gravity_on=False)
        rec = evolve(prepare_double_gaussian(lat, params), params, lat,
                     snapshot_times=np.arange(0, 8.1, 1.0))
        series = attraction_series(rec)
        assert np.all(np.diff(series.spreads) >= 0)

    def test_merge_detection(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        two = np.sqrt(np.exp(-((lat.x - 4) ** 2)) + np.exp(-((lat.x + 4) ** 2)))
        one = np.sqrt(np.exp(-(lat.x**2)))
        rec = record_from_densities(lat, 0.7, True, [0.0, 0.5, 1.0],
                                    [two, two, one])
        series = attraction_series(rec)
        assert series.merge_time == pytest.approx(1.0)
        assert series.separations[0] == pytest.approx(8.0, abs=lat.dx)
        assert series.separations[-1] == 0.0

    def test_needs_two_snapshots(self):
        lat = make_lattice(-20, 20, 401, 1, 10)
        rec = record_from_densities(lat, 0.7, True, [0.0], [np.exp(-lat.x**2)])
        with pytest.raises(InvalidParameterError):
            attraction_series(rec)


def test_peak_separation_degenerate_cases():
    lat = make_lattice(-20, 20, 401, 1, 10)
    assert peak_separation(find_peaks(np.zeros(401), lat, 0.05)) is None
    single = find_peaks(np.exp(-(lat.x**2)), lat, 0.05)
    assert peak_separation(single) == 0.0
