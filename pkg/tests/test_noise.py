"""Intrinsic-noise model: variances, field floor, slopes, sampling."""

import math

import numpy as np
import pytest

import rydlink as rl
from rydlink.constants import TWO_PI


def make_spec(**overrides):
    base = dict(
        epsilon=2.5e-5,
        n_rydberg=5e4,
        integration_time=1e-4,
        dephasing_time=6.366197723675813e-05,
        rf_dipole=6.4230e-27,
        derivative_step=1e-10,
    )
    base.update(overrides)
    return rl.NoiseSpec(**base)


class TestNoiseSpecValidation:
    def test_epsilon_zero_allowed(self):
        assert make_spec(epsilon=0.0).epsilon == 0.0

    @pytest.mark.parametrize(
        "field, value",
        [
            ("epsilon", -1e-9),
            ("epsilon", 1.0),
            ("epsilon", math.nan),
            ("n_rydberg", 0.5),
            ("integration_time", 0.0),
            ("dephasing_time", -1.0),
            ("rf_dipole", 0.0),
            ("derivative_step", math.inf),
        ],
    )
    def test_rejects_bad_field(self, field, value):
        with pytest.raises(rl.InvalidParameterError):
            make_spec(**{field: value})


class TestUncertaintyVariance:
    def test_scales_with_field_squared(self):
        # 0.5% field uncertainty (epsilon = u^2 = 2.5e-5) at the top
        # alphabet symbol.
        spec = make_spec()
        assert rl.uncertainty_variance(spec, 7e-4) == pytest.approx(1.225e-11, rel=1e-12)
        # and a 0.5-percent-of-E std written out directly
        spec5 = make_spec(epsilon=0.005)
        assert rl.uncertainty_variance(spec5, 7e-4) == pytest.approx(2.45e-9, rel=1e-12)

    def test_zero_field_zero_variance(self):
        assert rl.uncertainty_variance(make_spec(), 0.0) == 0.0

    def test_negative_field_rejected(self):
        with pytest.raises(rl.InvalidParameterError):
            rl.uncertainty_variance(make_spec(), -1e-6)


class TestProjectionMinField:
    def test_frozen_value(self):
        # 2 pi hbar / (|mu| sqrt(N_R T_i T_2)) with the values in make_spec
        assert rl.projection_min_field(make_spec()) == pytest.approx(
            5.7821991230314e-06, rel=1e-12
        )

    def test_scaling_exponents(self):
        spec = make_spec()
        base = rl.projection_min_field(spec)
        assert rl.projection_min_field(make_spec(n_rydberg=2e5)) == pytest.approx(
            base / 2.0, rel=1e-12
        )
        assert rl.projection_min_field(make_spec(rf_dipole=2 * 6.4230e-27)) == pytest.approx(
            base / 2.0, rel=1e-12
        )
        assert rl.projection_min_field(make_spec(integration_time=4e-4)) == pytest.approx(
            base / 2.0, rel=1e-12
        )

    def test_shipped_config_value(self, scenario):
        assert rl.projection_min_field(scenario.noise) == pytest.approx(
            5.782171090225885e-06, rel=1e-12
        )


class TestTotalNoiseSigma:
    def test_variance_additivity_machine_precision(self):
        spec = make_spec()
        for e in (0.0, 1e-6, 1e-4, 7e-4, 0.02):
            total = rl.total_noise_sigma(spec, e)
            expect = rl.uncertainty_variance(spec, e) + rl.projection_min_field(spec) ** 2
            assert total * total == pytest.approx(expect, rel=4e-16)

    def test_floor_at_zero_field(self):
        spec = make_spec()
        assert rl.total_noise_sigma(spec, 0.0) == rl.projection_min_field(spec)


class TestTransmissionSlope:
    def test_halving_step_converges(self, scenario):
        # central difference is second order; halving the step must move
        # the estimate by far less than a percent
        s1 = rl.transmission_slope(scenario.ladder, 3.5e-4, 1e-8, 0.0)
        s2 = rl.transmission_slope(scenario.ladder, 3.5e-4, 5e-9, 0.0)
        assert s2 == pytest.approx(s1, rel=1e-2)
        assert s1 == pytest.approx(-404.70686896720844, rel=1e-6)

    def test_one_sided_at_zero(self, scenario):
        # below delta_e the central stencil would need a negative field
        de = 1e-8
        s0 = rl.transmission_slope(scenario.ladder, 0.0, de, 0.0)
        t_p = rl.transmission_at(scenario.ladder, 0.0, "weakprobe", rf_field=de)
        t_0 = rl.transmission_at(scenario.ladder, 0.0, "weakprobe", rf_field=0.0)
        assert s0 == (t_p - t_0) / de

    def test_rejects_bad_inputs(self, scenario):
        with pytest.raises(rl.InvalidParameterError):
            rl.transmission_slope(scenario.ladder, 1e-4, 0.0, 0.0)
        with pytest.raises(rl.InvalidParameterError):
            rl.transmission_slope(scenario.ladder, -1e-4, 1e-8, 0.0)


class TestSampleNoisyTransmission:
    def test_scalar_draw_is_float(self):
        rng = np.random.Generator(np.random.Philox(7))
        out = rl.sample_noisy_transmission(0.8, -400.0, 6e-6, rng)
        assert isinstance(out, float)

    def test_moments(self):
        t, slope, sigma = 0.8, -400.0, 6e-6
        rng = np.random.Generator(np.random.Philox(2024))
        n = 100_000
        draws = rl.sample_noisy_transmission(t, slope, sigma, rng, size=n)
        sigma_t = abs(slope) * sigma
        assert abs(draws.mean() - t) < 4.0 * sigma_t / math.sqrt(n)
        assert draws.std(ddof=1) == pytest.approx(sigma_t, rel=1e-2)

    def test_not_clamped(self):
        # huge noise pushes samples outside [0, 1]; they must pass through
        rng = np.random.Generator(np.random.Philox(3))
        draws = rl.sample_noisy_transmission(0.5, 1.0, 10.0, rng, size=1000)
        assert draws.min() < 0.0 and draws.max() > 1.0

    def test_zero_sigma_is_exact(self):
        rng = np.random.Generator(np.random.Philox(4))
        assert rl.sample_noisy_transmission(0.75, -400.0, 0.0, rng) == 0.75

    def test_negative_sigma_rejected(self):
        rng = np.random.Generator(np.random.Philox(5))
        with pytest.raises(rl.InvalidParameterError):
            rl.sample_noisy_transmission(0.75, -400.0, -1e-6, rng)


def test_shipped_dephasing_time(scenario):
    # 2 / (gamma_3 + gamma_4) with the shipped decay rates
    gamma = scenario.ladder.decays.gamma
    assert scenario.noise.dephasing_time == pytest.approx(
        2.0 / (gamma[2] + gamma[3]), rel=1e-15
    )
    assert scenario.noise.dephasing_time == pytest.approx(6.366197723675813e-05, rel=1e-12)
