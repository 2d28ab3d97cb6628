"""Intrinsic receiver noise: measurement uncertainty and projection noise.

Both sources live in field units (V/m) and reach the observable through
the local transmission slope dT/dE, first order:

    T_noisy = T + dT/dE * n,    n ~ Normal(0, sigma)

with sigma^2 = epsilon * E_rf^2 (relative measurement uncertainty) plus
the square of the projection-noise field floor. Samples are deliberately
not clamped to [0, 1]; clamping would bias error rates at the alphabet
edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, TWO_PI
from .errors import InvalidParameterError
from .scenario import LadderConfig
from .spectroscopy import transmission_at

__all__ = [
    "NoiseSpec",
    "uncertainty_variance",
    "projection_min_field",
    "total_noise_sigma",
    "transmission_slope",
    "sample_noisy_transmission",
]


@dataclass(frozen=True)
class NoiseSpec:
    """Parameters of the two intrinsic noise sources.

    epsilon scales the variance, sigma_UN^2 = epsilon * E^2; a relative
    field-measurement uncertainty of u maps to epsilon = u^2.
    """

    epsilon: float
    n_rydberg: float
    integration_time: float  # s
    dephasing_time: float  # s
    rf_dipole: float  # C*m
    derivative_step: float  # V/m

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps) or not (0.0 <= eps < 1.0):
            raise InvalidParameterError(f"epsilon must be in [0, 1), got {eps!r}")
        if not math.isfinite(self.n_rydberg) or self.n_rydberg < 1:
            raise InvalidParameterError(f"n_rydberg must be >= 1, got {self.n_rydberg!r}")
        for name in ("integration_time", "dephasing_time", "rf_dipole", "derivative_step"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidParameterError(f"NoiseSpec.{name} must be > 0, got {v!r}")


def uncertainty_variance(spec: NoiseSpec, e_rf: float) -> float:
    """Field-measurement uncertainty variance epsilon * E_rf^2, in (V/m)^2."""
    if not math.isfinite(e_rf) or e_rf < 0:
        raise InvalidParameterError(f"e_rf must be >= 0, got {e_rf!r}")
    return spec.epsilon * e_rf * e_rf


def projection_min_field(spec: NoiseSpec) -> float:
    """Projection-noise field floor 2 pi hbar / (|mu| sqrt(N_R T_i T_2)), V/m."""
    return TWO_PI * HBAR / (
        abs(spec.rf_dipole)
        * math.sqrt(spec.n_rydberg * spec.integration_time * spec.dephasing_time)
    )


def total_noise_sigma(spec: NoiseSpec, e_rf: float) -> float:
    """Combined standard deviation of both sources, V/m."""
    qpn = projection_min_field(spec)
    return math.sqrt(uncertainty_variance(spec, e_rf) + qpn * qpn)


def transmission_slope(
    config: LadderConfig,
    e_rf: float,
    delta_e: float,
    readout_delta_c: float,
    engine: str = "weakprobe",
) -> float:
    """dT/dE at fixed readout detuning, per (V/m).

    Central finite difference; one-sided forward difference when e_rf is
    within delta_e of the field-domain boundary at zero.
    """
    if not math.isfinite(delta_e) or delta_e <= 0:
        raise InvalidParameterError(f"delta_e must be > 0, got {delta_e!r}")
    if not math.isfinite(e_rf) or e_rf < 0:
        raise InvalidParameterError(f"e_rf must be >= 0, got {e_rf!r}")
    t_plus = transmission_at(config, readout_delta_c, engine, rf_field=e_rf + delta_e)
    if e_rf >= delta_e:
        t_minus = transmission_at(config, readout_delta_c, engine, rf_field=e_rf - delta_e)
        return (t_plus - t_minus) / (2.0 * delta_e)
    t_here = transmission_at(config, readout_delta_c, engine, rf_field=e_rf)
    return (t_plus - t_here) / delta_e


def sample_noisy_transmission(t, slope, sigma, rng: np.random.Generator, size=None):
    """First-order noisy transmission T + slope * n, n ~ Normal(0, sigma).

    Scalar by default; pass ``size`` for a vectorized draw. Output is not
    clamped to [0, 1].
    """
    if not math.isfinite(sigma) or sigma < 0:
        raise InvalidParameterError(f"sigma must be >= 0, got {sigma!r}")
    if size is None:
        return float(t + slope * (sigma * rng.standard_normal()))
    return t + slope * (sigma * rng.standard_normal(size))
