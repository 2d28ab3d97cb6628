"""Amplitude-modulated link: calibration, demodulation, and error rates.

The transmitter keys the modulation field through a fixed amplitude
alphabet; the receiver reads one transmission value per symbol at a fixed
coupling detuning and slices it against midpoint thresholds.

Calibration: an off-resonant interferer shifts the readout extremum by the
quadratic Stark shift. A pilot sweep locates the true extremum; a
calibration accuracy of a percent then mis-sets the readout detuning to
(a/100) of the true shift, interpolating between the unshifted default
(a -> 0) and perfect tracking (a = 100).

Threshold policy:
- "pinned" (default): decision thresholds are built from the reference
  levels at the true extremum; imperfect calibration mis-sets only the
  readout detuning. Miscalibration then has a first-order effect on the
  error rate, which is the regime where accuracy comparisons are
  measurable.
- "recalibrated": thresholds are rebuilt from the levels at the
  miscalibrated readout detuning, as if the pilot procedure also re-learned
  the decision regions there. This cancels miscalibration to first order,
  leaving only second-order level compression (percent-level SER changes,
  invisible to Monte Carlo at realistic symbol counts).

The conventional-receiver baseline is the closed-form M-PAM SER over AWGN
with the residual post-filter interference added to the thermal noise
floor.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .constants import C_LIGHT, K_BOLTZMANN
from .errors import DemodulationInfeasibleError, InvalidParameterError
from .scenario import LadderConfig
from .noise import NoiseSpec, total_noise_sigma, transmission_slope
from .spectroscopy import (
    default_delta_c_grid,
    find_amplitude_extremum,
    sweep_spectrum,
    transmission_at,
)
from .weakprobe import ac_stark_shift
from ._kernels import demod_count_errors

__all__ = [
    "THRESHOLD_POLICIES",
    "CHUNK_SYMBOLS",
    "PamLinkConfig",
    "ConventionalRxSpec",
    "LinkOperatingPoint",
    "SerEstimate",
    "calibrated_readout_detuning",
    "reference_levels",
    "decision_thresholds",
    "demodulate",
    "calibration_reference",
    "estimate_ser_rydberg",
    "wilson_interval",
    "q_function",
    "conventional_ser",
    "symbol_energy",
    "effective_antenna_area",
    "interference_energy_after_filter",
    "thermal_noise_energy",
]

THRESHOLD_POLICIES = ("pinned", "recalibrated")

CHUNK_SYMBOLS = 65536
"""Monte Carlo block size. Each block draws from its own counter-based RNG
substream keyed by (seed, block index), so results are byte-identical for a
given seed regardless of worker count or scheduling. The block size is part
of the output contract: changing it changes the stream."""

_WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class PamLinkConfig:
    """Modulation alphabet and link-level parameters."""

    field_levels: Tuple[float, ...]  # V/m, strictly increasing, >= 0
    symbol_duration: float  # s
    rf_carrier: float  # Hz
    interference_carrier: float  # Hz
    interference_field: float  # V/m, at the conventional receiver's antenna
    calibration_accuracy: float  # percent in (0, 100]
    threshold_policy: str = "pinned"

    def __post_init__(self):
        levels = tuple(float(v) for v in self.field_levels)
        if len(levels) < 2:
            raise InvalidParameterError("field_levels needs at least 2 entries")
        for v in levels:
            if not math.isfinite(v) or v < 0:
                raise InvalidParameterError(f"field level {v!r} must be >= 0 and finite")
        if not all(b > a for a, b in zip(levels, levels[1:])):
            raise InvalidParameterError("field_levels must be strictly increasing")
        object.__setattr__(self, "field_levels", levels)
        if not math.isfinite(self.symbol_duration) or self.symbol_duration <= 0:
            raise InvalidParameterError("symbol_duration must be > 0")
        for name in ("rf_carrier", "interference_carrier"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidParameterError(f"{name} must be > 0, got {v!r}")
        if not math.isfinite(self.interference_field) or self.interference_field < 0:
            raise InvalidParameterError("interference_field must be >= 0")
        acc = float(self.calibration_accuracy)
        if not math.isfinite(acc) or not (0.0 < acc <= 100.0):
            raise InvalidParameterError(
                f"calibration_accuracy must be in (0, 100], got {acc!r}"
            )
        if self.threshold_policy not in THRESHOLD_POLICIES:
            raise InvalidParameterError(
                f"threshold_policy must be one of {THRESHOLD_POLICIES}, "
                f"got {self.threshold_policy!r}"
            )

    @property
    def m_levels(self) -> int:
        return len(self.field_levels)


@dataclass(frozen=True)
class ConventionalRxSpec:
    """Filtered envelope receiver for the closed-form SER baseline."""

    filter_attenuation_db: float
    antenna_gain: float = 1.5
    temperature: float = 290.0  # K
    impedance: float = 377.0  # ohm

    def __post_init__(self):
        if not math.isfinite(self.filter_attenuation_db) or self.filter_attenuation_db < 0:
            raise InvalidParameterError("filter_attenuation_db must be >= 0")
        for name in ("antenna_gain", "temperature", "impedance"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidParameterError(f"{name} must be > 0, got {v!r}")


def calibrated_readout_detuning(true_shift: float, accuracy: float) -> float:
    """Readout detuning at a given calibration accuracy percentage.

    Interpolates linearly between the unshifted default readout at
    accuracy -> 0 and the true extremum at 100.
    """
    if not math.isfinite(true_shift):
        raise InvalidParameterError("true_shift must be finite")
    if not math.isfinite(accuracy) or not (0.0 < accuracy <= 100.0):
        raise InvalidParameterError(f"accuracy must be in (0, 100], got {accuracy!r}")
    return (accuracy / 100.0) * true_shift


def reference_levels(
    config: LadderConfig,
    link: PamLinkConfig,
    readout_delta_c: float,
    engine: str = "weakprobe",
) -> np.ndarray:
    """Noiseless transmission per alphabet symbol at a fixed detuning.

    The sequence must be strictly monotone in symbol index or the alphabet
    cannot be sliced by thresholds.
    """
    levels = np.array(
        [
            transmission_at(config, readout_delta_c, engine, rf_field=e)
            for e in link.field_levels
        ],
        dtype=np.float64,
    )
    d = np.diff(levels)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise DemodulationInfeasibleError(
            f"reference levels are not strictly monotone: {levels.tolist()}"
        )
    return levels


def decision_thresholds(levels: Sequence[float]) -> np.ndarray:
    """Midpoints between adjacent reference levels."""
    lv = np.asarray(levels, dtype=np.float64)
    if lv.ndim != 1 or lv.size < 2:
        raise InvalidParameterError("need at least 2 levels")
    d = np.diff(lv)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise InvalidParameterError("levels must be strictly monotone")
    return 0.5 * (lv[:-1] + lv[1:])


def demodulate(t_noisy: float, thresholds: Sequence[float], level_order: str = "decreasing") -> int:
    """Map one noisy transmission to a symbol index.

    Values beyond the outermost threshold map to the edge symbols; a value
    exactly on a threshold resolves to the lower symbol index.
    """
    thr = np.asarray(thresholds, dtype=np.float64)
    if thr.ndim != 1 or thr.size == 0:
        raise InvalidParameterError("thresholds must be a non-empty 1-D array")
    d = np.diff(thr)
    if level_order == "decreasing":
        if thr.size > 1 and not np.all(d < 0):
            raise InvalidParameterError("thresholds must be strictly decreasing")
        return int(np.count_nonzero(t_noisy < thr))
    if level_order == "increasing":
        if thr.size > 1 and not np.all(d > 0):
            raise InvalidParameterError("thresholds must be strictly increasing")
        return int(np.count_nonzero(t_noisy > thr))
    raise InvalidParameterError(f"level_order must be 'increasing' or 'decreasing', got {level_order!r}")


@dataclass(frozen=True)
class LinkOperatingPoint:
    """Everything the Monte Carlo needs, precomputed once per scenario."""

    accuracy: float
    threshold_policy: str
    true_shift: float  # measured extremum position, rad/s
    analytic_shift: float  # quadratic Stark prediction, rad/s
    readout_delta_c: float
    decision_delta_c: float
    decision_levels: np.ndarray
    thresholds: np.ndarray
    tx_levels: np.ndarray  # noiseless transmission actually produced per symbol
    slopes: np.ndarray  # dT/dE per symbol at the readout detuning
    sigmas: np.ndarray  # field-domain noise std per symbol
    level_order: str


def calibration_reference(
    config: LadderConfig,
    link: PamLinkConfig,
    noise_spec: NoiseSpec,
    *,
    accuracy: float | None = None,
    engine: str = "weakprobe",
    delta_c_grid: np.ndarray | None = None,
) -> LinkOperatingPoint:
    """Run the pilot calibration and precompute the per-symbol tables.

    The pilot sweep transmits the mid-alphabet symbol and locates the
    interior transmission minimum; its position is the measured Stark
    shift of the readout point.
    """
    acc = link.calibration_accuracy if accuracy is None else float(accuracy)
    grid = default_delta_c_grid() if delta_c_grid is None else np.asarray(delta_c_grid)
    pilot_field = link.field_levels[link.m_levels // 2]
    trace = sweep_spectrum(config, grid, engine, rf_field=pilot_field)
    true_shift, _ = find_amplitude_extremum(trace)

    drv = config.drives()
    if drv.omega_i > 0 and drv.delta_i != 0.0:
        analytic = ac_stark_shift(drv.omega_i, drv.delta_i)
    else:
        analytic = 0.0

    readout = calibrated_readout_detuning(true_shift, acc)
    decision_dc = true_shift if link.threshold_policy == "pinned" else readout
    dec_levels = reference_levels(config, link, decision_dc, engine)
    thresholds = decision_thresholds(dec_levels)
    tx_levels = np.array(
        [transmission_at(config, readout, engine, rf_field=e) for e in link.field_levels]
    )
    slopes = np.array(
        [
            transmission_slope(config, e, noise_spec.derivative_step, readout, engine)
            for e in link.field_levels
        ]
    )
    sigmas = np.array([total_noise_sigma(noise_spec, e) for e in link.field_levels])
    order = "decreasing" if dec_levels[0] > dec_levels[-1] else "increasing"
    return LinkOperatingPoint(
        accuracy=acc,
        threshold_policy=link.threshold_policy,
        true_shift=float(true_shift),
        analytic_shift=float(analytic),
        readout_delta_c=float(readout),
        decision_delta_c=float(decision_dc),
        decision_levels=dec_levels,
        thresholds=thresholds,
        tx_levels=tx_levels,
        slopes=slopes,
        sigmas=sigmas,
        level_order=order,
    )


@dataclass(frozen=True)
class SerEstimate:
    ser: float
    n_errors: int
    n_symbols: int
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(n_errors: int, n_symbols: int, z: float = _WILSON_Z):
    """95% Wilson score interval; well-behaved at zero error counts."""
    if n_symbols <= 0:
        raise InvalidParameterError("n_symbols must be >= 1")
    if not (0 <= n_errors <= n_symbols):
        raise InvalidParameterError("n_errors must lie in [0, n_symbols]")
    p = n_errors / n_symbols
    z2 = z * z
    denom = 1.0 + z2 / n_symbols
    center = (p + z2 / (2.0 * n_symbols)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n_symbols + z2 / (4.0 * n_symbols * n_symbols)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(ss))


def estimate_ser_rydberg(
    config: LadderConfig,
    link: PamLinkConfig,
    noise_spec: NoiseSpec,
    n_symbols: int,
    seed: int,
    *,
    accuracy: float | None = None,
    engine: str = "weakprobe",
    workers: int = 1,
    delta_c_grid: np.ndarray | None = None,
    operating_point: LinkOperatingPoint | None = None,
) -> SerEstimate:
    """Monte Carlo symbol error rate of the direct transmission readout.

    Uniform random symbols; per symbol one Gaussian field-noise draw enters
    through the precomputed transmission slope; decisions are threshold
    slicing. Reproducible bit-for-bit for a fixed (seed, n_symbols),
    independent of ``workers``.
    """
    if n_symbols < 1:
        raise InvalidParameterError("n_symbols must be >= 1")
    if workers < 1:
        raise InvalidParameterError("workers must be >= 1")
    op = operating_point
    if op is None:
        op = calibration_reference(
            config, link, noise_spec, accuracy=accuracy, engine=engine, delta_c_grid=delta_c_grid
        )

    coeff = op.slopes * op.sigmas
    if op.level_order == "decreasing":
        lv, cf, thr = op.tx_levels, coeff, op.thresholds
    else:
        lv, cf, thr = -op.tx_levels, -coeff, -op.thresholds
    lv = np.ascontiguousarray(lv, dtype=np.float64)
    cf = np.ascontiguousarray(cf, dtype=np.float64)
    thr = np.ascontiguousarray(thr, dtype=np.float64)
    m = link.m_levels

    n_chunks = (n_symbols + CHUNK_SYMBOLS - 1) // CHUNK_SYMBOLS

    def run_chunk(c: int) -> int:
        rng = _chunk_rng(seed, c)
        start = c * CHUNK_SYMBOLS
        n_c = min(CHUNK_SYMBOLS, n_symbols - start)
        symbols = rng.integers(0, m, size=n_c, dtype=np.int64)
        z = rng.standard_normal(n_c)
        return int(demod_count_errors(symbols, z, lv, cf, thr))

    if workers == 1 or n_chunks == 1:
        errors = sum(run_chunk(c) for c in range(n_chunks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(run_chunk, range(n_chunks)))

    lo, hi = wilson_interval(errors, n_symbols)
    return SerEstimate(
        ser=errors / n_symbols,
        n_errors=int(errors),
        n_symbols=int(n_symbols),
        ci_low=lo,
        ci_high=hi,
        seed=int(seed),
    )


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    if not math.isfinite(x):
        raise InvalidParameterError(f"x must be finite, got {x!r}")
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def conventional_ser(m: int, es: float, n_eff: float) -> float:
    """Closed-form M-PAM symbol error rate over AWGN.

    2 (1 - 1/M) Q( sqrt( 6 Es / ((M^2 - 1) N_eff) ) ).
    """
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    if not math.isfinite(es) or es < 0:
        raise InvalidParameterError(f"es must be >= 0, got {es!r}")
    if not math.isfinite(n_eff) or n_eff <= 0:
        raise InvalidParameterError(f"n_eff must be > 0, got {n_eff!r}")
    return 2.0 * (1.0 - 1.0 / m) * q_function(math.sqrt(6.0 * es / ((m * m - 1) * n_eff)))


def effective_antenna_area(f: float, g: float) -> float:
    """A_eff = lambda^2 G / (4 pi) at carrier frequency f."""
    if not math.isfinite(f) or f <= 0:
        raise InvalidParameterError(f"f must be > 0, got {f!r}")
    if not math.isfinite(g) or g <= 0:
        raise InvalidParameterError(f"g must be > 0, got {g!r}")
    lam = C_LIGHT / f
    return lam * lam * g / (4.0 * math.pi)


def symbol_energy(link: PamLinkConfig, rx: ConventionalRxSpec, *, mean_of_squares: bool = False) -> float:
    """Average symbol energy captured by the conventional antenna.

    Default is the square of the mean alphabet field, mean(E)^2 / (2 Z0) *
    T_s * A_eff; ``mean_of_squares`` switches to the mean of the squared
    fields, the standard alphabet-average definition.
    """
    fields = np.asarray(link.field_levels, dtype=np.float64)
    base = float(np.mean(fields**2)) if mean_of_squares else float(np.mean(fields)) ** 2
    a_eff = effective_antenna_area(link.rf_carrier, rx.antenna_gain)
    return base / (2.0 * rx.impedance) * link.symbol_duration * a_eff


def interference_energy_after_filter(
    e_i: float, f_i: float, t_s: float, rx: ConventionalRxSpec
) -> float:
    """Residual interferer energy behind the front-end filter."""
    if not math.isfinite(e_i) or e_i < 0:
        raise InvalidParameterError(f"e_i must be >= 0, got {e_i!r}")
    if not math.isfinite(t_s) or t_s <= 0:
        raise InvalidParameterError(f"t_s must be > 0, got {t_s!r}")
    a_eff = effective_antenna_area(f_i, rx.antenna_gain)
    return (
        e_i * e_i / (2.0 * rx.impedance) * t_s * a_eff
        * 10.0 ** (-rx.filter_attenuation_db / 10.0)
    )


def thermal_noise_energy(temperature: float) -> float:
    """Thermal noise energy kT."""
    if not math.isfinite(temperature) or temperature <= 0:
        raise InvalidParameterError(f"temperature must be > 0, got {temperature!r}")
    return K_BOLTZMANN * temperature
