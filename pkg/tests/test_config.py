"""Config parsing: unit grammar, schema policing, round-trip, digest."""

import math

import pytest

import rydlink as rl
from rydlink.constants import EA0, TWO_PI


@pytest.fixture(scope="module")
def config_text(config_path):
    return config_path.read_text()


class TestShippedConfig:
    def test_physics_values(self, scenario):
        lad = scenario.ladder
        assert lad.delta_i == pytest.approx(-TWO_PI * 31e9, rel=1e-15)
        assert lad.delta_p == 0.0 and lad.delta_c == 0.0 and lad.delta_rf == 0.0
        assert lad.coupling_field == pytest.approx(8e4, rel=1e-15)
        assert lad.rf_field == pytest.approx(7e-4, rel=1e-12)
        assert lad.cell_length == pytest.approx(0.075, rel=1e-15)
        assert lad.atomic_density == 1e17
        assert lad.decays.gamma == pytest.approx(
            (0.0, TWO_PI * 6e6, TWO_PI * 3e3, TWO_PI * 2e3, TWO_PI * 2e3), rel=1e-15
        )

    def test_noise_values(self, scenario):
        noise = scenario.noise
        assert noise.epsilon == 2.5e-5
        assert noise.n_rydberg == 5e4
        assert noise.dephasing_time == pytest.approx(6.366197723675813e-05, rel=1e-12)
        assert noise.rf_dipole == pytest.approx(757.58 * EA0, rel=1e-15)
        assert noise.derivative_step == pytest.approx(1e-8, rel=1e-12)

    def test_link_and_run_values(self, scenario):
        assert scenario.link.field_levels[7] == pytest.approx(7e-4, rel=1e-12)
        assert scenario.link.interference_field == 1.0
        assert scenario.rx.filter_attenuation_db == 70.0
        assert scenario.attenuations_db == (70.0, 75.0, 80.0, 85.0)
        assert scenario.accuracies == (40.0, 60.0, 80.0, 100.0)
        assert scenario.sweep_points == 1601
        assert scenario.sweep_half_span == pytest.approx(TWO_PI * 30e3, rel=1e-15)
        assert scenario.seed == 12345
        assert scenario.n_symbols == 10_000_000
        assert scenario.calibration_jitter is False
        assert scenario.laser_fwhm == 100.0


class TestParseQuantity:
    @pytest.mark.parametrize(
        "value, kind, expect",
        [
            ("123.5 rad/s", "angular", 123.5),
            ("-456 rad/s", "angular", -456.0),
            ("2pi*6 MHz", "angular", TWO_PI * 6e6),
            ("-2pi*31 GHz", "angular", -TWO_PI * 31e9),
            ("+2pi*3 kHz", "angular", TWO_PI * 3e3),
            ("2pi*0.5 Hz", "angular", math.pi),
            ("14.2 GHz", "frequency", 14.2e9),
            ("100 Hz", "frequency", 100.0),
            ("7 uV/cm", "field", 7e-4),
            ("0.1 nV/cm", "field", 1e-8),
            ("80 kV/m", "field", 8e4),
            ("5 mV/m", "field", 5e-3),
            ("2 uV/m", "field", 2e-6),
            ("100 us", "time", 1e-4),
            ("1 ms", "time", 1e-3),
            ("780 nm", "length", 7.8e-7),
            ("75 mm", "length", 0.075),
            ("2 um", "length", 2e-6),
            ("1e17 m^-3", "density", 1e17),
            ("2.5342e-29 C*m", "dipole", 2.5342e-29),
            ("757.58 ea0", "dipole", 757.58 * EA0),
            ("290 K", "temperature", 290.0),
        ],
    )
    def test_accepted(self, value, kind, expect):
        assert rl.parse_quantity(value, kind, "t") == pytest.approx(expect, rel=1e-12)

    @pytest.mark.parametrize(
        "value, kind",
        [
            # angular rates in Hz units need the explicit 2pi* prefix
            ("6 MHz", "angular"),
            ("2pi*6 rad/s", "angular"),
            ("2pi*6 THz", "angular"),
            # and the prefix is meaningless anywhere else
            ("2pi*1 GHz", "frequency"),
            ("2pi*1 V/m", "field"),
            ("1 rad/s", "frequency"),
            ("1 Tesla", "field"),
            ("1 min", "time"),
            ("1 ft", "length"),
            ("1 cm^-3", "density"),
            ("1 Debye", "dipole"),
            ("1 C", "temperature"),
            # malformed structure
            ("290K", "temperature"),
            ("290 K extra", "temperature"),
            ("abc K", "temperature"),
            ("inf K", "temperature"),
            ("nan rad/s", "angular"),
            (290, "temperature"),
            (None, "field"),
        ],
    )
    def test_rejected(self, value, kind):
        with pytest.raises(rl.ConfigError):
            rl.parse_quantity(value, kind, "t")

    def test_error_names_the_field_path(self):
        with pytest.raises(rl.ConfigError, match=r"detunings\.rf"):
            rl.parse_quantity("6 MHz", "angular", "detunings.rf")

    def test_unknown_kind_is_a_programming_error(self):
        with pytest.raises(rl.InvalidParameterError):
            rl.parse_quantity("1 V/m", "voltage", "t")


class TestSchemaErrors:
    def test_missing_section(self, config_text):
        start = config_text.index("[cell]")
        end = config_text.index("[noise]")
        mangled = config_text[:start] + config_text[end:]
        with pytest.raises(rl.ConfigError, match="cell: missing required section"):
            rl.parse_config(mangled)

    def test_unknown_section(self, config_text):
        mangled = config_text.replace("[cell]", "[basement]")
        with pytest.raises(rl.ConfigError, match="basement"):
            rl.parse_config(mangled)

    def test_unknown_key(self, config_text):
        mangled = config_text.replace("points = 1601", "points = 1601\nstride = 2")
        with pytest.raises(rl.ConfigError, match=r"sweep: unknown keys.*stride"):
            rl.parse_config(mangled)

    def test_missing_key(self, config_text):
        mangled = config_text.replace('probe = "1 V/m"\n', "")
        with pytest.raises(rl.ConfigError, match=r"fields\.probe: missing"):
            rl.parse_config(mangled)

    def test_bad_accuracy_names_index(self, config_text):
        mangled = config_text.replace(
            "accuracies = [40.0, 60.0, 80.0, 100.0]",
            "accuracies = [40.0, 0.0, 80.0, 100.0]",
        )
        with pytest.raises(rl.ConfigError, match=r"run\.accuracies\[1\]"):
            rl.parse_config(mangled)

    def test_boolean_is_not_a_number(self, config_text):
        mangled = config_text.replace("epsilon = 2.5e-5", "epsilon = true")
        with pytest.raises(rl.ConfigError, match=r"noise\.epsilon"):
            rl.parse_config(mangled)

    def test_n_symbols_minimum(self, config_text):
        mangled = config_text.replace("n_symbols = 10000000", "n_symbols = 0")
        with pytest.raises(rl.ConfigError, match=r"run\.n_symbols"):
            rl.parse_config(mangled)

    def test_sweep_points_minimum(self, config_text):
        mangled = config_text.replace("points = 1601", "points = 3")
        with pytest.raises(rl.ConfigError, match=r"sweep\.points"):
            rl.parse_config(mangled)

    def test_toml_syntax_error(self):
        with pytest.raises(rl.ConfigError, match="TOML syntax"):
            rl.parse_config("[levels\nclosing bracket missing")

    def test_domain_violation_carries_section(self, config_text):
        # a physically invalid value that only the dataclass constructor
        # catches still surfaces as a ConfigError naming its section
        mangled = config_text.replace('"2 uV/cm"', '"99 uV/cm"')
        with pytest.raises(rl.ConfigError, match="pam"):
            rl.parse_config(mangled)


class TestRoundTripAndDigest:
    def test_serialize_parse_round_trip(self, scenario):
        text = rl.serialize_config(scenario)
        assert rl.parse_config(text) == scenario

    def test_digest_stable(self, scenario):
        d1 = rl.config_digest(scenario)
        d2 = rl.config_digest(scenario)
        assert d1 == d2
        assert len(d1) == 64
        int(d1, 16)  # hex

    def test_digest_tracks_content(self, scenario, config_text):
        other = rl.parse_config(config_text.replace("seed = 12345", "seed = 54321"))
        assert rl.config_digest(other) != rl.config_digest(scenario)

    def test_digest_ignores_unit_spelling(self, scenario, config_text):
        rad_s = repr(TWO_PI * 6e6)
        respelled = config_text.replace(
            'gamma_2 = "2pi*6 MHz"', f'gamma_2 = "{rad_s} rad/s"'
        )
        other = rl.parse_config(respelled)
        assert other == scenario
        assert rl.config_digest(other) == rl.config_digest(scenario)

    def test_digest_ignores_comments_and_layout(self, scenario, config_text):
        stripped = "\n".join(
            line for line in config_text.splitlines()
            if line.strip() and not line.strip().startswith("#")
        )
        assert rl.config_digest(rl.parse_config(stripped)) == rl.config_digest(scenario)


def test_load_config_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        rl.load_config(tmp_path / "missing.toml")
