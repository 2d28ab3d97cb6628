"""Probe transmission spectra and feature extraction.

Coherence -> transmission via Beer-Lambert, coupling-detuning sweeps with a
choice of three coherence engines, and the two readout feature finders:
the between-peaks extremum (amplitude-regime readout) and the peak-to-peak
splitting (frequency-regime readout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import EPSILON_0, HBAR, TWO_PI
from .core import build_interaction_matrix, steady_state
from .errors import InvalidCoherenceError, InvalidParameterError, NoSplittingError
from .scenario import CellSpec, LadderConfig
from .weakprobe import rho21_exact_weakprobe, rho21_stark_approx

__all__ = [
    "ENGINES",
    "SpectrumTrace",
    "beer_lambert_transmission",
    "transmission_at",
    "sweep_spectrum",
    "find_amplitude_extremum",
    "find_ats_splitting",
    "default_delta_c_grid",
]

ENGINES = ("numeric", "weakprobe", "stark")

_ENGINE_ALIASES = {
    "numeric": "numeric",
    "weakprobe": "weakprobe",
    "exact-weakprobe": "weakprobe",
    "stark": "stark",
    "stark-approx": "stark",
}

# Coherences with a positive imaginary part above this are gain, which the
# absorptive model cannot produce; below it they are roundoff and clamp to
# full transparency.
_GAIN_TOLERANCE = 1e-9


def _resolve_engine(engine: str) -> str:
    try:
        return _ENGINE_ALIASES[engine]
    except KeyError:
        raise InvalidParameterError(
            f"unknown engine {engine!r}; expected one of {sorted(set(_ENGINE_ALIASES))}"
        ) from None


@dataclass(frozen=True)
class SpectrumTrace:
    """Sampled transmission vs coupling detuning.

    delta_c strictly increasing, transmissions in (0, 1].
    """

    delta_c: np.ndarray
    transmission: np.ndarray

    def __post_init__(self):
        dc = np.asarray(self.delta_c, dtype=np.float64)
        tr = np.asarray(self.transmission, dtype=np.float64)
        if dc.ndim != 1 or tr.shape != dc.shape or dc.size == 0:
            raise InvalidParameterError("trace needs matching non-empty 1-D arrays")
        if not np.all(np.isfinite(dc)) or not np.all(np.isfinite(tr)):
            raise InvalidParameterError("trace contains non-finite samples")
        if dc.size > 1 and not np.all(np.diff(dc) > 0):
            raise InvalidParameterError("delta_c grid must be strictly increasing")
        bad = np.nonzero((tr <= 0.0) | (tr > 1.0))[0]
        if bad.size:
            i = int(bad[0])
            raise InvalidParameterError(
                f"transmission {tr[i]!r} at delta_c={dc[i]!r} rad/s outside (0, 1]"
            )
        dc.flags.writeable = False
        tr.flags.writeable = False
        object.__setattr__(self, "delta_c", dc)
        object.__setattr__(self, "transmission", tr)

    def __len__(self) -> int:
        return int(self.delta_c.size)

    @property
    def samples(self):
        """Ordered (delta_c, transmission) pairs."""
        return list(zip(self.delta_c.tolist(), self.transmission.tolist()))


def beer_lambert_transmission(rho21: complex, cell: CellSpec, omega_p: float) -> float:
    """T = exp[4 pi N L |mu21|^2 / (hbar eps0 lambda_p Omega_p) * Im(rho21)].

    Absorptive coherences (Im <= 0) give T in (0, 1]; extreme optical depth
    may underflow to exactly 0.0 in float64. Im(rho21) in (0, 1e-9] is
    treated as roundoff and clamps to T = 1; larger positive values mean
    gain and raise.
    """
    if not math.isfinite(omega_p) or omega_p <= 0:
        raise InvalidParameterError(f"omega_p must be strictly positive, got {omega_p!r}")
    im = rho21.imag
    if im > _GAIN_TOLERANCE:
        raise InvalidCoherenceError(
            f"Im(rho21) = {im:.3e} > 0 implies gain, outside the absorptive model"
        )
    kappa = (
        4.0
        * math.pi
        * cell.atomic_density
        * cell.cell_length
        * cell.probe_dipole**2
        / (HBAR * EPSILON_0 * cell.probe_wavelength * omega_p)
    )
    return math.exp(kappa * min(im, 0.0))


def transmission_at(
    config: LadderConfig,
    delta_c: float,
    engine: str = "weakprobe",
    *,
    rf_field: float | None = None,
    interference_field: float | None = None,
) -> float:
    """Single transmission value at one coupling detuning."""
    engine = _resolve_engine(engine)
    drives = config.drives(
        delta_c=delta_c, rf_field=rf_field, interference_field=interference_field
    )
    if engine == "numeric":
        rho = steady_state(build_interaction_matrix(drives), config.decays)
        rho21 = complex(rho[1, 0])
    elif engine == "weakprobe":
        rho21 = rho21_exact_weakprobe(drives, config.decays)
    else:
        rho21 = rho21_stark_approx(drives, config.decays).rho21
    return beer_lambert_transmission(rho21, config.cell, drives.omega_p)


def sweep_spectrum(
    config: LadderConfig,
    delta_c_grid,
    engine: str = "weakprobe",
    *,
    rf_field: float | None = None,
    interference_field: float | None = None,
) -> SpectrumTrace:
    """Evaluate the chosen engine over a strictly increasing detuning grid.

    Pointwise deterministic; engine failures are re-raised annotated with
    the failing grid point.
    """
    engine = _resolve_engine(engine)
    grid = np.asarray(delta_c_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidParameterError("delta_c grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)):
        raise InvalidParameterError("delta_c grid contains non-finite values")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise InvalidParameterError("delta_c grid must be strictly increasing")
    out = np.empty(grid.size, dtype=np.float64)
    for k, dc in enumerate(grid):
        try:
            out[k] = transmission_at(
                config,
                float(dc),
                engine,
                rf_field=rf_field,
                interference_field=interference_field,
            )
        except InvalidParameterError:
            raise
        except Exception as exc:
            raise type(exc)(f"at delta_c = {float(dc)!r} rad/s: {exc}") from exc
    return SpectrumTrace(delta_c=grid.copy(), transmission=out)


def default_delta_c_grid(
    half_span: float = TWO_PI * 30e3, points: int = 1601
) -> np.ndarray:
    """Symmetric detuning window; the default covers both dressed peaks of
    the largest shipped modulation field with margin."""
    if not math.isfinite(half_span) or half_span <= 0:
        raise InvalidParameterError("half_span must be positive")
    if points < 3:
        raise InvalidParameterError("grid needs at least 3 points")
    return np.linspace(-half_span, half_span, int(points))


def _parabolic_vertex(x1, y1, x2, y2, x3, y3):
    # Vertex of the parabola through three points; falls back to the middle
    # sample when the points are collinear.
    s21 = (x2 - x1) * (y2 - y3)
    s23 = (x2 - x3) * (y2 - y1)
    denom = s21 - s23
    if denom == 0.0:
        return x2, y2
    xv = x2 - 0.5 * ((x2 - x1) * s21 - (x2 - x3) * s23) / denom
    # Lagrange evaluation at xv
    l1 = (xv - x2) * (xv - x3) / ((x1 - x2) * (x1 - x3))
    l2 = (xv - x1) * (xv - x3) / ((x2 - x1) * (x2 - x3))
    l3 = (xv - x1) * (xv - x2) / ((x3 - x1) * (x3 - x2))
    return xv, y1 * l1 + y2 * l2 + y3 * l3


def find_amplitude_extremum(trace: SpectrumTrace):
    """Interior transmission minimum, parabolic-refined.

    This is the amplitude-regime readout point: the dip between the two
    dressed peaks. Returns (delta_c_star, t_star). A trace whose minimum
    sits on the boundary (monotone trace) has no interior extremum.
    """
    if len(trace) < 3:
        raise InvalidParameterError("need at least 3 samples to locate an extremum")
    t = trace.transmission
    x = trace.delta_c
    i = int(np.argmin(t[1:-1])) + 1
    local_min = t[i] <= t[i - 1] and t[i] <= t[i + 1]
    strict = t[i] < t[i - 1] or t[i] < t[i + 1]
    if not (local_min and strict):
        raise NoSplittingError("trace has no interior transmission minimum")
    return _parabolic_vertex(x[i - 1], t[i - 1], x[i], t[i], x[i + 1], t[i + 1])


def find_ats_splitting(trace: SpectrumTrace) -> float:
    """Distance in rad/s between the two dominant interior maxima.

    The frequency-regime readout: the dressed-state splitting tracks the
    modulation Rabi frequency. Maxima are refined parabolically; among
    candidate pairs the highest combined height wins, ties broken by the
    widest separation.
    """
    if len(trace) < 5:
        raise InvalidParameterError("need at least 5 samples to measure a splitting")
    t = trace.transmission
    x = trace.delta_c
    peaks = [
        i
        for i in range(1, len(trace) - 1)
        if t[i] > t[i - 1] and t[i] > t[i + 1]
    ]
    if len(peaks) < 2:
        raise NoSplittingError(f"found {len(peaks)} interior maxima, need 2")
    best = None
    for a_idx in range(len(peaks)):
        for b_idx in range(a_idx + 1, len(peaks)):
            ia, ib = peaks[a_idx], peaks[b_idx]
            key = (t[ia] + t[ib], abs(x[ib] - x[ia]))
            if best is None or key > best[0]:
                best = (key, ia, ib)
    _, ia, ib = best
    xa, _ = _parabolic_vertex(x[ia - 1], t[ia - 1], x[ia], t[ia], x[ia + 1], t[ia + 1])
    xb, _ = _parabolic_vertex(x[ib - 1], t[ib - 1], x[ib], t[ib], x[ib + 1], t[ib + 1])
    return abs(xb - xa)
