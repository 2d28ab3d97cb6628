"""Closed-form weak-probe coherence of the five-level ladder.

In the weak-probe limit (ground state undepleted) the steady-state
coherences (rho_21, rho_31, rho_41, rho_51) obey a tridiagonal 4x4 linear
system whose rho_21 component collapses to a nested continued fraction:

    rho_21 = -(i/2) Omega_p / (D1 + Omega_c^2 / (4 (D2 + Omega_RF^2 /
             (4 (D3 + Omega_I^2 / (4 D4))))))

with D_k = gamma_(k+1,1) - i * (cumulative detuning through drive k).
Every denominator has a strictly positive real part when the decoherence
rates are positive, so the fraction is numerically benign.

Both the fraction and the direct 4x4 solve are exposed; they must agree to
1e-12 relative, which pins down transcription errors in either one. The
far-detuned interference branch additionally admits the quadratic Stark
approximation, which folds the top level into an effective RF detuning
shift of Omega_I^2 / (4 Delta_I); the approximation drops the top-level
decoherence gamma_51 entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DecaySpec, DriveSet
from .errors import InvalidCoherenceError, InvalidParameterError, SingularSystemError

__all__ = [
    "WeakProbeResult",
    "rho21_exact_weakprobe",
    "rho21_stark_approx",
    "ac_stark_shift",
    "solve_weakprobe_linear_system",
]

# Denominators below this magnitude (natural rad/s units) raise instead of
# silently producing infinities.
DENOMINATOR_FLOOR = 1e-30


@dataclass(frozen=True)
class WeakProbeResult:
    """Weak-probe coherence plus the effective RF detuning that produced it."""

    rho21: complex
    effective_rf_detuning: float

    def __post_init__(self):
        if abs(self.rho21) > 1.0 + 1e-9:
            raise InvalidCoherenceError(
                f"|rho21| = {abs(self.rho21):.6g} exceeds 1; outside the "
                "weak-probe validity domain"
            )


def _denominators(drives: DriveSet, decays: DecaySpec):
    dp, dc, drf, di = drives.detuning
    cum2 = dp
    cum3 = dp + dc
    cum4 = dp + dc + drf
    cum5 = dp + dc + drf + di
    return (
        complex(decays.gamma_pair(2, 1), -cum2),
        complex(decays.gamma_pair(3, 1), -cum3),
        complex(decays.gamma_pair(4, 1), -cum4),
        complex(decays.gamma_pair(5, 1), -cum5),
    )


def _checked_div(num: float, den: complex) -> complex:
    if abs(den) < DENOMINATOR_FLOOR:
        raise SingularSystemError(
            f"weak-probe denominator magnitude {abs(den):.3e} below floor "
            f"{DENOMINATOR_FLOOR:g}"
        )
    return num / den


def rho21_exact_weakprobe(drives: DriveSet, decays: DecaySpec) -> complex:
    """Probe coherence from the full four-branch continued fraction."""
    if decays.gamma_pair(2, 1) <= 0:
        raise InvalidParameterError("gamma_21 must be positive for the weak-probe form")
    d1, d2, d3, d4 = _denominators(drives, decays)
    _, oc, orf, oi = drives.rabi
    t = d3 + _checked_div(0.25 * oi * oi, d4)
    t = d2 + _checked_div(0.25 * orf * orf, t)
    t = d1 + _checked_div(0.25 * oc * oc, t)
    return _checked_div(1.0, t) * (-0.5j * drives.omega_p)


def ac_stark_shift(omega_i: float, delta_i: float) -> float:
    """Quadratic level shift Omega_I^2 / (4 Delta_I) in rad/s."""
    if not np.isfinite(omega_i) or not np.isfinite(delta_i):
        raise InvalidParameterError("omega_i and delta_i must be finite")
    if delta_i == 0.0:
        raise InvalidParameterError(
            "ac_stark_shift diverges at delta_i = 0 (resonant interference)"
        )
    return omega_i * omega_i / (4.0 * delta_i)


def rho21_stark_approx(drives: DriveSet, decays: DecaySpec) -> WeakProbeResult:
    """Probe coherence with the interference branch folded into Delta_RF.

    Valid far off interference resonance. The effective RF detuning is
    Delta_RF - Omega_I^2/(4 Delta_I); the top-level decoherence gamma_51
    does not appear in this form.
    """
    if decays.gamma_pair(2, 1) <= 0:
        raise InvalidParameterError("gamma_21 must be positive for the weak-probe form")
    shift = ac_stark_shift(drives.omega_i, drives.delta_i)
    eff_drf = drives.delta_rf - shift
    dp, dc = drives.delta_p, drives.delta_c
    d1 = complex(decays.gamma_pair(2, 1), -dp)
    d2 = complex(decays.gamma_pair(3, 1), -(dp + dc))
    d3 = complex(decays.gamma_pair(4, 1), -(dp + dc + eff_drf))
    _, oc, orf, _ = drives.rabi
    t = d2 + _checked_div(0.25 * orf * orf, d3)
    t = d1 + _checked_div(0.25 * oc * oc, t)
    rho = _checked_div(1.0, t) * (-0.5j * drives.omega_p)
    return WeakProbeResult(rho21=rho, effective_rf_detuning=eff_drf)


def solve_weakprobe_linear_system(drives: DriveSet, decays: DecaySpec):
    """Direct solve of the 4x4 weak-probe system.

    Returns (rho21, rho31, rho41, rho51). The rho21 component is the
    reference value for the continued fraction.
    """
    if decays.gamma_pair(2, 1) <= 0:
        raise InvalidParameterError("gamma_21 must be positive for the weak-probe form")
    d1, d2, d3, d4 = _denominators(drives, decays)
    op, oc, orf, oi = drives.rabi
    half = 0.5j
    a = np.array(
        [
            [d1, half * oc, 0.0, 0.0],
            [half * oc, d2, half * orf, 0.0],
            [0.0, half * orf, d3, half * oi],
            [0.0, 0.0, half * oi, d4],
        ],
        dtype=np.complex128,
    )
    b = np.array([-half * op, 0.0, 0.0, 0.0], dtype=np.complex128)
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"weak-probe system is singular: {exc}") from exc
    return tuple(complex(s) for s in sol)
