"""Scenario files: TOML parsing, validation, canonical serialization.

Every dimensioned value in a config file is a quoted string "<number>
<unit>" so the units are always explicit. Angular rates (detunings, decay
rates, sweep span) accept either plain "rad/s" or the form "2pi*X Hz"
(kHz/MHz/GHz); a bare "X Hz" is rejected for angular quantities because
silently multiplying by 2*pi or not is the classic way these scenarios go
wrong. Carrier frequencies are cycle frequencies and take bare Hz units
only.

``serialize_config`` writes a canonical form with every value in base SI
units and a fixed key order; ``config_digest`` hashes that form, so two
files that parse to the same scenario get the same digest regardless of
their original units or formatting.
"""

from __future__ import annotations

import hashlib
import math
import re
import sys
from dataclasses import dataclass
from typing import Any, Mapping, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10
    import tomli as tomllib

from .constants import EA0, TWO_PI
from .core import DecaySpec, LevelScheme
from .errors import ConfigError, InvalidParameterError
from .link import ConventionalRxSpec, PamLinkConfig
from .noise import NoiseSpec
from .scenario import LadderConfig

__all__ = [
    "ScenarioConfig",
    "parse_quantity",
    "parse_config",
    "load_config",
    "serialize_config",
    "config_digest",
]

_FREQ_SCALE = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}
_FIELD_SCALE = {
    "V/m": 1.0,
    "kV/m": 1e3,
    "mV/m": 1e-3,
    "uV/m": 1e-6,
    "uV/cm": 1e-4,
    "nV/cm": 1e-7,
}
_TIME_SCALE = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9}
_LENGTH_SCALE = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}
_DIPOLE_SCALE = {"C*m": 1.0, "ea0": EA0}

_ANGULAR_PREFIX = re.compile(r"([+-]?)2pi\*(\S+)")


def _float_token(token: str, path: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ConfigError(f"{path}: {token!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{path}: value must be finite, got {token!r}")
    return value


def parse_quantity(value: Any, kind: str, path: str) -> float:
    """Convert one quoted quantity string to its SI value.

    kind selects the accepted unit family: angular, frequency, field, time,
    length, density, dipole, temperature.
    """
    if not isinstance(value, str):
        raise ConfigError(
            f"{path}: expected a quoted quantity string like \"1 V/m\", got {value!r}"
        )
    parts = value.split()
    if len(parts) != 2:
        raise ConfigError(f"{path}: expected '<number> <unit>', got {value!r}")
    num_tok, unit = parts

    if kind == "angular":
        if unit == "rad/s":
            return _float_token(num_tok, path)
        if unit in _FREQ_SCALE:
            m = _ANGULAR_PREFIX.fullmatch(num_tok)
            if m is None:
                raise ConfigError(
                    f"{path}: angular rates in Hz units need the explicit '2pi*' "
                    f"prefix (e.g. \"2pi*6 MHz\") or plain rad/s, got {value!r}"
                )
            sign = -1.0 if m.group(1) == "-" else 1.0
            return sign * TWO_PI * _float_token(m.group(2), path) * _FREQ_SCALE[unit]
        raise ConfigError(f"{path}: unknown angular-rate unit {unit!r}")

    if "2pi" in num_tok:
        raise ConfigError(f"{path}: '2pi*' is only valid for angular rates, got {value!r}")

    scale_map = {
        "frequency": _FREQ_SCALE,
        "field": _FIELD_SCALE,
        "time": _TIME_SCALE,
        "length": _LENGTH_SCALE,
        "density": {"m^-3": 1.0},
        "dipole": _DIPOLE_SCALE,
        "temperature": {"K": 1.0},
    }.get(kind)
    if scale_map is None:
        raise InvalidParameterError(f"unknown quantity kind {kind!r}")
    if unit not in scale_map:
        raise ConfigError(
            f"{path}: unit {unit!r} not valid for {kind} "
            f"(accepted: {', '.join(sorted(scale_map))})"
        )
    return _float_token(num_tok, path) * scale_map[unit]


def _table(doc: Mapping[str, Any], name: str) -> Mapping[str, Any]:
    if name not in doc:
        raise ConfigError(f"{name}: missing required section")
    section = doc[name]
    if not isinstance(section, dict):
        raise ConfigError(f"{name}: must be a table")
    return section


def _check_keys(table: Mapping[str, Any], allowed: set, path: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")


def _get(table: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in table:
        raise ConfigError(f"{path}.{key}: missing required key")
    return table[key]


def _number(table: Mapping[str, Any], key: str, path: str) -> float:
    v = _get(table, key, path)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{path}.{key}: value must be finite")
    return v


def _integer(table: Mapping[str, Any], key: str, path: str, minimum: int) -> int:
    v = _get(table, key, path)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {v}")
    return v


def _boolean(table: Mapping[str, Any], key: str, path: str, default: bool) -> bool:
    if key not in table:
        return default
    v = table[key]
    if not isinstance(v, bool):
        raise ConfigError(f"{path}.{key}: expected true or false, got {v!r}")
    return v


def _quantity(table: Mapping[str, Any], key: str, kind: str, path: str) -> float:
    return parse_quantity(_get(table, key, path), kind, f"{path}.{key}")


def _number_list(table: Mapping[str, Any], key: str, path: str) -> Tuple[float, ...]:
    v = _get(table, key, path)
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{path}.{key}: expected a non-empty array of numbers")
    out = []
    for i, item in enumerate(v):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"{path}.{key}[{i}]: expected a number, got {item!r}")
        out.append(float(item))
    return tuple(out)


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully resolved scenario: physics, noise, link, baseline, run plan."""

    ladder: LadderConfig
    noise: NoiseSpec
    link: PamLinkConfig
    rx: ConventionalRxSpec
    attenuations_db: Tuple[float, ...]
    accuracies: Tuple[float, ...]
    sweep_half_span: float  # rad/s
    sweep_points: int
    seed: int
    n_symbols: int
    calibration_jitter: bool
    laser_fwhm: float  # Hz


def parse_config(text: str) -> ScenarioConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax error: {exc}") from None
    return _build(doc)


def load_config(path) -> ScenarioConfig:
    # open()/read() errors propagate as OSError for the CLI's I/O exit code
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_config(data.decode("utf-8"))


def _build(doc: Mapping[str, Any]) -> ScenarioConfig:
    _check_keys(
        doc,
        {
            "levels",
            "fields",
            "detunings",
            "decays",
            "cell",
            "noise",
            "pam",
            "conventional",
            "sweep",
            "run",
        },
        "config",
    )

    levels_t = _table(doc, "levels")
    _check_keys(
        levels_t,
        {"dipole_12", "dipole_23", "dipole_34", "dipole_45", "probe_wavelength"},
        "levels",
    )
    dipoles = {
        (1, 2): _quantity(levels_t, "dipole_12", "dipole", "levels"),
        (2, 3): _quantity(levels_t, "dipole_23", "dipole", "levels"),
        (3, 4): _quantity(levels_t, "dipole_34", "dipole", "levels"),
        (4, 5): _quantity(levels_t, "dipole_45", "dipole", "levels"),
    }
    probe_wavelength = _quantity(levels_t, "probe_wavelength", "length", "levels")

    fields_t = _table(doc, "fields")
    _check_keys(fields_t, {"probe", "coupling", "rf", "interference"}, "fields")
    field_values = {
        name: _quantity(fields_t, name, "field", "fields")
        for name in ("probe", "coupling", "rf", "interference")
    }

    detunings_t = _table(doc, "detunings")
    _check_keys(detunings_t, {"probe", "coupling", "rf", "interference"}, "detunings")
    detuning_values = {
        name: _quantity(detunings_t, name, "angular", "detunings")
        for name in ("probe", "coupling", "rf", "interference")
    }

    decays_t = _table(doc, "decays")
    _check_keys(decays_t, {"gamma_2", "gamma_3", "gamma_4", "gamma_5"}, "decays")
    gammas = tuple(
        _quantity(decays_t, f"gamma_{i}", "angular", "decays") for i in range(2, 6)
    )

    cell_t = _table(doc, "cell")
    _check_keys(cell_t, {"density", "length"}, "cell")
    density = _quantity(cell_t, "density", "density", "cell")
    length = _quantity(cell_t, "length", "length", "cell")

    noise_t = _table(doc, "noise")
    _check_keys(
        noise_t,
        {"epsilon", "n_rydberg", "integration_time", "derivative_step"},
        "noise",
    )
    epsilon = _number(noise_t, "epsilon", "noise")
    n_rydberg = _number(noise_t, "n_rydberg", "noise")
    integration_time = _quantity(noise_t, "integration_time", "time", "noise")
    derivative_step = _quantity(noise_t, "derivative_step", "field", "noise")

    pam_t = _table(doc, "pam")
    _check_keys(
        pam_t,
        {
            "field_levels",
            "symbol_duration",
            "rf_carrier",
            "interference_carrier",
            "calibration_accuracy",
            "threshold_policy",
        },
        "pam",
    )
    raw_levels = _get(pam_t, "field_levels", "pam")
    if not isinstance(raw_levels, list) or len(raw_levels) < 2:
        raise ConfigError("pam.field_levels: expected an array of at least 2 quantity strings")
    pam_fields = tuple(
        parse_quantity(item, "field", f"pam.field_levels[{i}]")
        for i, item in enumerate(raw_levels)
    )
    symbol_duration = _quantity(pam_t, "symbol_duration", "time", "pam")
    rf_carrier = _quantity(pam_t, "rf_carrier", "frequency", "pam")
    interference_carrier = _quantity(pam_t, "interference_carrier", "frequency", "pam")
    calibration_accuracy = (
        _number(pam_t, "calibration_accuracy", "pam")
        if "calibration_accuracy" in pam_t
        else 100.0
    )
    threshold_policy = pam_t.get("threshold_policy", "pinned")
    if not isinstance(threshold_policy, str):
        raise ConfigError(f"pam.threshold_policy: expected a string, got {threshold_policy!r}")

    conv_t = _table(doc, "conventional")
    _check_keys(
        conv_t,
        {"attenuations_db", "antenna_gain", "temperature", "impedance"},
        "conventional",
    )
    attenuations = _number_list(conv_t, "attenuations_db", "conventional")
    antenna_gain = _number(conv_t, "antenna_gain", "conventional")
    temperature = _quantity(conv_t, "temperature", "temperature", "conventional")
    impedance = _number(conv_t, "impedance", "conventional")

    sweep_t = _table(doc, "sweep")
    _check_keys(sweep_t, {"half_span", "points"}, "sweep")
    half_span = _quantity(sweep_t, "half_span", "angular", "sweep")
    if half_span <= 0:
        raise ConfigError("sweep.half_span: must be > 0")
    points = _integer(sweep_t, "points", "sweep", minimum=5)

    run_t = _table(doc, "run")
    _check_keys(
        run_t,
        {"seed", "n_symbols", "accuracies", "calibration_jitter", "laser_fwhm"},
        "run",
    )
    seed = _integer(run_t, "seed", "run", minimum=0)
    n_symbols = _integer(run_t, "n_symbols", "run", minimum=1)
    accuracies = _number_list(run_t, "accuracies", "run")
    for i, acc in enumerate(accuracies):
        if not (0.0 < acc <= 100.0):
            raise ConfigError(f"run.accuracies[{i}]: must be in (0, 100], got {acc}")
    jitter = _boolean(run_t, "calibration_jitter", "run", default=False)
    laser_fwhm = (
        parse_quantity(run_t["laser_fwhm"], "frequency", "run.laser_fwhm")
        if "laser_fwhm" in run_t
        else 100.0
    )
    if laser_fwhm <= 0:
        raise ConfigError("run.laser_fwhm: must be > 0")

    try:
        level_scheme = LevelScheme(dipole_moments=dipoles, probe_wavelength=probe_wavelength)
        decay_spec = DecaySpec(gamma=(0.0,) + gammas)
        ladder = LadderConfig(
            levels=level_scheme,
            probe_field=field_values["probe"],
            coupling_field=field_values["coupling"],
            rf_field=field_values["rf"],
            interference_field=field_values["interference"],
            delta_p=detuning_values["probe"],
            delta_c=detuning_values["coupling"],
            delta_rf=detuning_values["rf"],
            delta_i=detuning_values["interference"],
            decays=decay_spec,
            atomic_density=density,
            cell_length=length,
        )
    except InvalidParameterError as exc:
        raise ConfigError(f"levels/fields/detunings/decays/cell: {exc}") from None

    gamma_sum = gammas[1] + gammas[2]  # levels 3 and 4 bound the upper coherence
    if gamma_sum <= 0:
        raise ConfigError("decays: gamma_3 + gamma_4 must be > 0 to set the dephasing time")
    try:
        noise = NoiseSpec(
            epsilon=epsilon,
            n_rydberg=n_rydberg,
            integration_time=integration_time,
            dephasing_time=2.0 / gamma_sum,
            rf_dipole=abs(dipoles[(3, 4)]),
            derivative_step=derivative_step,
        )
    except InvalidParameterError as exc:
        raise ConfigError(f"noise: {exc}") from None

    try:
        link = PamLinkConfig(
            field_levels=pam_fields,
            symbol_duration=symbol_duration,
            rf_carrier=rf_carrier,
            interference_carrier=interference_carrier,
            interference_field=field_values["interference"],
            calibration_accuracy=calibration_accuracy,
            threshold_policy=threshold_policy,
        )
    except InvalidParameterError as exc:
        raise ConfigError(f"pam: {exc}") from None

    try:
        rx = ConventionalRxSpec(
            filter_attenuation_db=attenuations[0],
            antenna_gain=antenna_gain,
            temperature=temperature,
            impedance=impedance,
        )
    except InvalidParameterError as exc:
        raise ConfigError(f"conventional: {exc}") from None
    for i, att in enumerate(attenuations):
        if att < 0:
            raise ConfigError(f"conventional.attenuations_db[{i}]: must be >= 0, got {att}")

    return ScenarioConfig(
        ladder=ladder,
        noise=noise,
        link=link,
        rx=rx,
        attenuations_db=attenuations,
        accuracies=accuracies,
        sweep_half_span=half_span,
        sweep_points=points,
        seed=seed,
        n_symbols=n_symbols,
        calibration_jitter=jitter,
        laser_fwhm=laser_fwhm,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical TOML form: SI units, fixed key order, repr floats.

    Parsing the result reproduces the input ScenarioConfig exactly (float
    repr round-trips), which is what makes the digest well-defined.
    """
    lv = cfg.ladder.levels
    lines = []
    a = lines.append
    a("[levels]")
    a(f'dipole_12 = "{_fmt(lv.dipole(1, 2))} C*m"')
    a(f'dipole_23 = "{_fmt(lv.dipole(2, 3))} C*m"')
    a(f'dipole_34 = "{_fmt(lv.dipole(3, 4))} C*m"')
    a(f'dipole_45 = "{_fmt(lv.dipole(4, 5))} C*m"')
    a(f'probe_wavelength = "{_fmt(lv.probe_wavelength)} m"')
    a("")
    a("[fields]")
    a(f'probe = "{_fmt(cfg.ladder.probe_field)} V/m"')
    a(f'coupling = "{_fmt(cfg.ladder.coupling_field)} V/m"')
    a(f'rf = "{_fmt(cfg.ladder.rf_field)} V/m"')
    a(f'interference = "{_fmt(cfg.ladder.interference_field)} V/m"')
    a("")
    a("[detunings]")
    a(f'probe = "{_fmt(cfg.ladder.delta_p)} rad/s"')
    a(f'coupling = "{_fmt(cfg.ladder.delta_c)} rad/s"')
    a(f'rf = "{_fmt(cfg.ladder.delta_rf)} rad/s"')
    a(f'interference = "{_fmt(cfg.ladder.delta_i)} rad/s"')
    a("")
    a("[decays]")
    for i in range(2, 6):
        a(f'gamma_{i} = "{_fmt(cfg.ladder.decays.gamma[i - 1])} rad/s"')
    a("")
    a("[cell]")
    a(f'density = "{_fmt(cfg.ladder.atomic_density)} m^-3"')
    a(f'length = "{_fmt(cfg.ladder.cell_length)} m"')
    a("")
    a("[noise]")
    a(f"epsilon = {_fmt(cfg.noise.epsilon)}")
    a(f"n_rydberg = {_fmt(cfg.noise.n_rydberg)}")
    a(f'integration_time = "{_fmt(cfg.noise.integration_time)} s"')
    a(f'derivative_step = "{_fmt(cfg.noise.derivative_step)} V/m"')
    a("")
    a("[pam]")
    levels_csv = ", ".join(f'"{_fmt(v)} V/m"' for v in cfg.link.field_levels)
    a(f"field_levels = [{levels_csv}]")
    a(f'symbol_duration = "{_fmt(cfg.link.symbol_duration)} s"')
    a(f'rf_carrier = "{_fmt(cfg.link.rf_carrier)} Hz"')
    a(f'interference_carrier = "{_fmt(cfg.link.interference_carrier)} Hz"')
    a(f"calibration_accuracy = {_fmt(cfg.link.calibration_accuracy)}")
    a(f'threshold_policy = "{cfg.link.threshold_policy}"')
    a("")
    a("[conventional]")
    a(f"attenuations_db = [{', '.join(_fmt(v) for v in cfg.attenuations_db)}]")
    a(f"antenna_gain = {_fmt(cfg.rx.antenna_gain)}")
    a(f'temperature = "{_fmt(cfg.rx.temperature)} K"')
    a(f"impedance = {_fmt(cfg.rx.impedance)}")
    a("")
    a("[sweep]")
    a(f'half_span = "{_fmt(cfg.sweep_half_span)} rad/s"')
    a(f"points = {cfg.sweep_points}")
    a("")
    a("[run]")
    a(f"seed = {cfg.seed}")
    a(f"n_symbols = {cfg.n_symbols}")
    a(f"accuracies = [{', '.join(_fmt(v) for v in cfg.accuracies)}]")
    a(f"calibration_jitter = {'true' if cfg.calibration_jitter else 'false'}")
    a(f'laser_fwhm = "{_fmt(cfg.laser_fwhm)} Hz"')
    a("")
    return "\n".join(lines)


def config_digest(cfg: ScenarioConfig) -> str:
    """SHA-256 hex digest of the canonical serialization."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()
