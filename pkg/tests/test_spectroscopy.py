"""Transmission, traces, and feature finders."""

import math

import numpy as np
import pytest

import rydlink as rl

TWO_PI = 2.0 * math.pi


class TestBeerLambert:
    def test_thin_cell_frozen_exponent(self, scenario):
        # Resonant two-level coherence through a 75 um cell; exponent
        # hand-evaluated from the kappa formula.
        cell = rl.CellSpec(
            atomic_density=1e17,
            cell_length=75e-6,
            probe_dipole=2.5342e-29,
            probe_wavelength=780e-9,
        )
        omega_p = rl.rabi_from_field(2.5342e-29, 1.0)
        t = rl.beer_lambert_transmission(-0.0063743162593209j, cell, omega_p)
        assert t == pytest.approx(math.exp(-2.2044603324924), rel=1e-12)

    def test_full_cell_resonant_probe_underflows_to_zero(self, scenario):
        omega_p = rl.rabi_from_field(2.5342e-29, 1.0)
        t = rl.beer_lambert_transmission(
            -0.0063743162593209j, scenario.ladder.cell, omega_p
        )
        assert t == 0.0

    def test_zero_absorption_is_full_transparency(self, scenario):
        omega_p = rl.rabi_from_field(2.5342e-29, 1.0)
        assert rl.beer_lambert_transmission(0.1 + 0.0j, scenario.ladder.cell, omega_p) == 1.0
        # positive imaginary part within roundoff clamps rather than raises
        assert (
            rl.beer_lambert_transmission(1e-10j, scenario.ladder.cell, omega_p) == 1.0
        )

    def test_gain_raises(self, scenario):
        omega_p = rl.rabi_from_field(2.5342e-29, 1.0)
        with pytest.raises(rl.InvalidCoherenceError):
            rl.beer_lambert_transmission(2e-9j, scenario.ladder.cell, omega_p)

    def test_requires_positive_probe_rabi(self, scenario):
        with pytest.raises(rl.InvalidParameterError):
            rl.beer_lambert_transmission(-0.001j, scenario.ladder.cell, 0.0)


class TestTransmissionAt:
    def test_frozen_operating_point(self, scenario):
        t = rl.transmission_at(scenario.ladder, TWO_PI * 1e3, "weakprobe")
        assert t == pytest.approx(0.7258937170261317, rel=1e-12)

    def test_engines_agree_at_shipped_probe(self, scenario):
        dc = TWO_PI * 5e3
        t_weak = rl.transmission_at(scenario.ladder, dc, "weakprobe")
        t_num = rl.transmission_at(scenario.ladder, dc, "numeric")
        t_stark = rl.transmission_at(scenario.ladder, dc, "stark")
        assert t_num == pytest.approx(t_weak, rel=1e-2)
        assert t_stark == pytest.approx(t_weak, rel=1e-3)

    def test_engine_aliases_and_unknown_engine(self, scenario):
        dc = TWO_PI * 5e3
        assert rl.transmission_at(scenario.ladder, dc, "exact-weakprobe") == rl.transmission_at(
            scenario.ladder, dc, "weakprobe"
        )
        assert rl.transmission_at(scenario.ladder, dc, "stark-approx") == rl.transmission_at(
            scenario.ladder, dc, "stark"
        )
        with pytest.raises(rl.InvalidParameterError):
            rl.transmission_at(scenario.ladder, dc, "magic")


class TestSpectrumTrace:
    def test_rejects_unsorted_grid(self):
        with pytest.raises(rl.InvalidParameterError):
            rl.SpectrumTrace(delta_c=np.array([0.0, -1.0]), transmission=np.array([0.5, 0.5]))

    def test_rejects_out_of_range_transmission_naming_the_point(self):
        with pytest.raises(rl.InvalidParameterError) as err:
            rl.SpectrumTrace(
                delta_c=np.array([1.0, 2.0, 3.0]),
                transmission=np.array([0.5, 0.0, 0.5]),
            )
        assert "2.0" in str(err.value)

    def test_arrays_are_read_only(self):
        trace = rl.SpectrumTrace(
            delta_c=np.array([0.0, 1.0]), transmission=np.array([0.5, 0.6])
        )
        with pytest.raises(ValueError):
            trace.transmission[0] = 0.9
        assert len(trace) == 2
        assert trace.samples == [(0.0, 0.5), (1.0, 0.6)]


class TestSweep:
    def test_sweep_shape_and_determinism(self, scenario):
        grid = rl.default_delta_c_grid(TWO_PI * 30e3, 41)
        a = rl.sweep_spectrum(scenario.ladder, grid, "weakprobe")
        b = rl.sweep_spectrum(scenario.ladder, grid, "weakprobe")
        assert len(a) == 41
        np.testing.assert_array_equal(a.transmission, b.transmission)

    def test_engine_failure_is_annotated_with_grid_point(self, scenario):
        fragile = scenario.ladder.with_fields(
            interference_field=0.0,
            decays=rl.DecaySpec(gamma=(0.0, TWO_PI * 6e6, 0.0, 0.0, 0.0)),
        )
        with pytest.raises(rl.SingularSystemError) as err:
            rl.sweep_spectrum(fragile, np.array([-1.0, 0.0, 1.0]), "weakprobe")
        assert "at delta_c = 0.0" in str(err.value)

    def test_rejects_bad_grid(self, scenario):
        with pytest.raises(rl.InvalidParameterError):
            rl.sweep_spectrum(scenario.ladder, np.array([[0.0, 1.0]]), "weakprobe")
        with pytest.raises(rl.InvalidParameterError):
            rl.sweep_spectrum(scenario.ladder, np.array([0.0, np.nan]), "weakprobe")


def test_default_grid_properties():
    grid = rl.default_delta_c_grid()
    assert grid.size == 1601
    assert grid[0] == -TWO_PI * 30e3
    assert grid[-1] == TWO_PI * 30e3
    assert np.all(np.diff(grid) > 0)
    with pytest.raises(rl.InvalidParameterError):
        rl.default_delta_c_grid(points=2)


class TestAmplitudeExtremum:
    def test_recovers_parabola_vertex_off_grid(self):
        x = np.linspace(-5.0, 5.0, 11)
        x0 = 0.37
        t = 0.4 + 0.01 * (x - x0) ** 2
        trace = rl.SpectrumTrace(delta_c=x, transmission=t)
        xv, tv = rl.find_amplitude_extremum(trace)
        assert xv == pytest.approx(x0, abs=1e-12)
        assert tv == pytest.approx(0.4, abs=1e-12)

    def test_monotone_trace_has_no_extremum(self):
        x = np.linspace(0.0, 1.0, 9)
        trace = rl.SpectrumTrace(delta_c=x, transmission=0.1 + 0.05 * x)
        with pytest.raises(rl.NoSplittingError):
            rl.find_amplitude_extremum(trace)

    def test_needs_three_samples(self):
        trace = rl.SpectrumTrace(delta_c=np.array([0.0, 1.0]), transmission=np.array([0.5, 0.4]))
        with pytest.raises(rl.InvalidParameterError):
            rl.find_amplitude_extremum(trace)

    def test_shipped_scenario_dip_location(self, scenario):
        grid = rl.default_delta_c_grid(scenario.sweep_half_span, scenario.sweep_points)
        trace = rl.sweep_spectrum(
            scenario.ladder, grid, "weakprobe", rf_field=scenario.ladder.rf_field
        )
        dc_star, t_star = rl.find_amplitude_extremum(trace)
        # Quadratic interference shift of the readout dip
        assert dc_star == pytest.approx(-9563.723129215132, abs=TWO_PI * 20)
        assert 0.0 < t_star < 1.0


class TestAtsSplitting:
    def test_synthetic_double_peak(self):
        x = np.linspace(-10.0, 10.0, 201)
        t = 0.3 + 0.5 * np.exp(-0.5 * (x - 3.0) ** 2) + 0.5 * np.exp(-0.5 * (x + 3.0) ** 2)
        trace = rl.SpectrumTrace(delta_c=x, transmission=t)
        assert rl.find_ats_splitting(trace) == pytest.approx(6.0, rel=5e-3)

    def test_single_peak_raises(self):
        x = np.linspace(-5.0, 5.0, 51)
        t = 0.3 + 0.5 * np.exp(-0.5 * x**2)
        trace = rl.SpectrumTrace(delta_c=x, transmission=t)
        with pytest.raises(rl.NoSplittingError):
            rl.find_ats_splitting(trace)

    def test_needs_five_samples(self):
        trace = rl.SpectrumTrace(
            delta_c=np.array([0.0, 1.0, 2.0]), transmission=np.array([0.5, 0.6, 0.5])
        )
        with pytest.raises(rl.InvalidParameterError):
            rl.find_ats_splitting(trace)

    def test_shipped_scenario_splitting_tracks_modulation_rabi(self, scenario):
        # Strong modulation makes the two dressed peaks resolvable. With the
        # absorption floor saturated between them, the apparent maxima sit
        # outside +-omega_rf/2, so the separation overshoots omega_rf; it
        # must still grow with the field and stay within a factor of two.
        ladder = scenario.ladder.with_fields(interference_field=0.0)
        splits = {}
        for e_rf in (0.01, 0.02):
            drives = ladder.drives(rf_field=e_rf)
            grid = rl.default_delta_c_grid(1.6 * drives.omega_rf, 1601)
            trace = rl.sweep_spectrum(ladder, grid, "weakprobe", rf_field=e_rf)
            splits[e_rf] = rl.find_ats_splitting(trace)
            assert drives.omega_rf < splits[e_rf] < 2.0 * drives.omega_rf
        assert splits[0.02] > splits[0.01]
