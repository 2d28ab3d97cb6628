"""Five-level ladder Hamiltonian, decay map, and Lindblad solvers.

The interaction picture collapses the physics into one real symmetric
matrix M (couplings on the first off-diagonal, cumulative detunings on the
diagonal) so the master equation reads

    drho/dt = -(i/2) (M rho - rho M) + L(rho)

with L the cascade decay map. Everything here works on plain numpy arrays;
``validate_density_matrix`` is the boundary guard for state invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Tuple

import numpy as np

from .constants import HBAR, N_LEVELS
from .errors import InvalidParameterError, SingularSystemError, StepTooLargeError
from ._kernels import rk4_step_loop

__all__ = [
    "LevelScheme",
    "DriveSet",
    "DecaySpec",
    "rabi_from_field",
    "build_interaction_matrix",
    "decay_map",
    "master_rhs",
    "liouvillian_matrix",
    "steady_state",
    "time_evolve",
    "validate_density_matrix",
]

# Above this many steps time_evolve switches from the literal RK4 loop to
# binary powering of the one-step propagator (identical linear map).
_LOOP_STEP_LIMIT = 20000


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class LevelScheme:
    """Ladder level structure: adjacent-transition dipole moments.

    ``dipole_moments`` maps 1-indexed adjacent pairs (i, i+1) to the
    electric dipole matrix element in C*m. Key order is normalized, so
    (2, 1) and (1, 2) address the same transition.
    """

    dipole_moments: Mapping[Tuple[int, int], float]
    probe_wavelength: float
    n_levels: int = N_LEVELS

    def __post_init__(self):
        if self.n_levels < 2:
            raise InvalidParameterError("n_levels must be at least 2")
        _require_finite("probe_wavelength", self.probe_wavelength)
        if self.probe_wavelength <= 0:
            raise InvalidParameterError("probe_wavelength must be positive")
        normalized = {}
        for key, mu in dict(self.dipole_moments).items():
            i, j = int(key[0]), int(key[1])
            if i > j:
                i, j = j, i
            if j != i + 1 or i < 1 or j > self.n_levels:
                raise InvalidParameterError(
                    f"dipole moment key {key!r}: only ladder-adjacent "
                    f"transitions (i, i+1) within 1..{self.n_levels} are allowed"
                )
            mu = _require_finite(f"dipole moment {key!r}", mu)
            if mu <= 0:
                raise InvalidParameterError(
                    f"dipole moment {key!r} must be strictly positive, got {mu}"
                )
            normalized[(i, j)] = mu
        object.__setattr__(self, "dipole_moments", normalized)

    def dipole(self, i: int, j: int) -> float:
        """Dipole moment of the (i, j) transition, order-insensitive."""
        key = (i, j) if i < j else (j, i)
        try:
            return self.dipole_moments[key]
        except KeyError:
            raise InvalidParameterError(
                f"no dipole moment configured for transition {key}"
            ) from None


@dataclass(frozen=True)
class DriveSet:
    """Rabi frequencies and detunings of the four drives, in rad/s.

    Order is fixed bottom-up: (probe, coupling, rf, interference).
    Phases are taken real and non-negative.
    """

    rabi: Tuple[float, float, float, float]
    detuning: Tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.rabi) != 4 or len(self.detuning) != 4:
            raise InvalidParameterError("DriveSet needs exactly 4 rabi and 4 detuning values")
        rabi = tuple(_require_finite(f"rabi[{k}]", v) for k, v in enumerate(self.rabi))
        detuning = tuple(
            _require_finite(f"detuning[{k}]", v) for k, v in enumerate(self.detuning)
        )
        for k, v in enumerate(rabi):
            if v < 0:
                raise InvalidParameterError(f"rabi[{k}] must be >= 0, got {v}")
        object.__setattr__(self, "rabi", rabi)
        object.__setattr__(self, "detuning", detuning)

    @property
    def omega_p(self) -> float:
        return self.rabi[0]

    @property
    def omega_c(self) -> float:
        return self.rabi[1]

    @property
    def omega_rf(self) -> float:
        return self.rabi[2]

    @property
    def omega_i(self) -> float:
        return self.rabi[3]

    @property
    def delta_p(self) -> float:
        return self.detuning[0]

    @property
    def delta_c(self) -> float:
        return self.detuning[1]

    @property
    def delta_rf(self) -> float:
        return self.detuning[2]

    @property
    def delta_i(self) -> float:
        return self.detuning[3]


@dataclass(frozen=True)
class DecaySpec:
    """Population decay rates per level, rad/s; level 1 must not decay."""

    gamma: Tuple[float, ...] = field(default=(0.0,) * N_LEVELS)

    def __post_init__(self):
        gamma = tuple(_require_finite(f"gamma[{k}]", v) for k, v in enumerate(self.gamma))
        if len(gamma) < 2:
            raise InvalidParameterError("DecaySpec needs at least two levels")
        if gamma[0] != 0.0:
            raise InvalidParameterError(f"gamma of level 1 must be 0, got {gamma[0]}")
        for k, v in enumerate(gamma):
            if v < 0:
                raise InvalidParameterError(f"gamma[{k}] must be >= 0, got {v}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def n_levels(self) -> int:
        return len(self.gamma)

    def gamma_pair(self, i: int, j: int) -> float:
        """Decoherence rate (Gamma_i + Gamma_j)/2 between 1-indexed levels."""
        n = len(self.gamma)
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidParameterError(f"level indices ({i}, {j}) out of range 1..{n}")
        return 0.5 * (self.gamma[i - 1] + self.gamma[j - 1])


def validate_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    diag_tol: float = 1e-9,
) -> np.ndarray:
    """Check Hermiticity, unit trace, and diagonal range; return rho.

    Raises InvalidParameterError on violation. diag_tol bounds both how
    negative and how far above 1 a population may sit.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidParameterError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(np.float64))):
        raise InvalidParameterError("density matrix contains non-finite entries")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise InvalidParameterError(f"density matrix not Hermitian: max deviation {herm:.3e}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise InvalidParameterError(f"density matrix trace {tr!r} deviates from 1")
    diag = np.diag(rho)
    if np.abs(diag.imag).max() > herm_tol:
        raise InvalidParameterError("density matrix diagonal is not real")
    if diag.real.min() < -diag_tol or diag.real.max() > 1.0 + diag_tol:
        raise InvalidParameterError(
            f"populations outside [0, 1]: min {diag.real.min():.3e}, max {diag.real.max():.3e}"
        )
    return rho


def rabi_from_field(mu: float, field_amplitude: float) -> float:
    """Rabi frequency mu * E / hbar in rad/s."""
    mu = _require_finite("mu", mu)
    field_amplitude = _require_finite("field_amplitude", field_amplitude)
    if mu <= 0:
        raise InvalidParameterError(f"mu must be strictly positive, got {mu}")
    if field_amplitude < 0:
        raise InvalidParameterError(f"field_amplitude must be >= 0, got {field_amplitude}")
    return mu * field_amplitude / HBAR


def build_interaction_matrix(drives: DriveSet) -> np.ndarray:
    """Real symmetric 5x5 interaction matrix, entries in rad/s.

    Couplings sit on the first off-diagonal; the diagonal carries minus
    twice the cumulative detuning of each level.
    """
    op, oc, orf, oi = drives.rabi
    dp, dc, drf, di = drives.detuning
    m = np.zeros((5, 5), dtype=np.float64)
    off = (op, oc, orf, oi)
    for k in range(4):
        m[k, k + 1] = off[k]
        m[k + 1, k] = off[k]
    cum = 0.0
    for k, d in enumerate((dp, dc, drf, di)):
        cum += d
        m[k + 1, k + 1] = -2.0 * cum
    return m


def decay_map(rho: np.ndarray, decays: DecaySpec) -> np.ndarray:
    """Cascade decay superoperator L applied to rho.

    Population flows strictly down the ladder (level i+1 feeds level i);
    off-diagonal elements decay at the pairwise decoherence rates. The
    diagonal telescopes, so trace(L(rho)) = 0 identically.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    g = np.asarray(decays.gamma, dtype=np.float64)
    n = g.shape[0]
    if rho.shape != (n, n):
        raise InvalidParameterError(
            f"rho shape {rho.shape} does not match {n}-level decay spec"
        )
    gpair = 0.5 * (g[:, None] + g[None, :])
    out = -gpair * rho
    diag = np.empty(n, dtype=np.complex128)
    diag[:-1] = g[1:] * np.diag(rho)[1:] - g[:-1] * np.diag(rho)[:-1]
    diag[-1] = -g[-1] * rho[n - 1, n - 1]
    np.fill_diagonal(out, diag)
    return out


def master_rhs(rho: np.ndarray, m: np.ndarray, decays: DecaySpec) -> np.ndarray:
    """Right-hand side -(i/2)(M rho - rho M) + L(rho); traceless."""
    rho = np.asarray(rho, dtype=np.complex128)
    m = np.asarray(m, dtype=np.float64)
    comm = m @ rho - rho @ m
    return -0.5j * comm + decay_map(rho, decays)


def liouvillian_matrix(m: np.ndarray, decays: DecaySpec) -> np.ndarray:
    """Dense superoperator A with vec(master_rhs(rho)) = A vec(rho).

    Row-major vec convention: element (i, j) of rho sits at index i*n + j.
    """
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    g = np.asarray(decays.gamma, dtype=np.float64)
    if g.shape[0] != n:
        raise InvalidParameterError("interaction matrix and decay spec sizes differ")
    ident = np.eye(n)
    a = -0.5j * (np.kron(m, ident) - np.kron(ident, m.T)).astype(np.complex128)
    for i in range(n):
        for j in range(n):
            p = i * n + j
            if i == j:
                a[p, p] += -g[i]
                if i + 1 < n:
                    a[p, (i + 1) * n + (i + 1)] += g[i + 1]
            else:
                a[p, p] += -0.5 * (g[i] + g[j])
    return a


def steady_state(m: np.ndarray, decays: DecaySpec) -> np.ndarray:
    """Unique fixed point of the master equation with unit trace.

    Vectorizes the n^2 unknowns, replaces the redundant drho_11/dt row
    with the trace constraint, and solves densely. Rows are equilibrated
    and one iterative-refinement step is applied: the superoperator spans
    ~7 orders of magnitude at far-detuned operating points and the raw LU
    residual would otherwise dominate weak coherences.
    """
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    g = np.asarray(decays.gamma, dtype=np.float64)
    if not np.any(g > 0):
        raise SingularSystemError("no decay channel: steady state is not unique")
    a = liouvillian_matrix(m, decays)
    dim = n * n
    sys_a = a.copy()
    sys_a[0, :] = 0.0
    sys_a[0, :: n + 1] = 1.0
    b = np.zeros(dim, dtype=np.complex128)
    b[0] = 1.0

    scale = np.abs(sys_a).max(axis=1)
    if np.any(scale == 0.0):
        raise SingularSystemError("degenerate balance equations: steady state is not unique")
    sys_scaled = sys_a / scale[:, None]
    try:
        x = np.linalg.solve(sys_scaled, b / scale)
        resid = b - sys_a @ x
        x += np.linalg.solve(sys_scaled, resid / scale)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"steady-state system is singular: {exc}") from exc

    rho = x.reshape(n, n)
    rho = 0.5 * (rho + rho.conj().T)

    residual = np.abs(master_rhs(rho, m, decays)).max()
    tol = 1e-12 * max(np.abs(m).max(), float(g.max()))
    if tol > 0 and residual > tol:
        raise SingularSystemError(
            f"steady-state residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )
    return validate_density_matrix(rho)


# Powering runs in extended precision where the platform has one. The
# propagator's rounded fixed point sits ~eps/(h * relaxation gap) away from
# the true steady state, and h * gap can reach 1e-6 here, so double rounding
# alone would cap long-horizon accuracy near 1e-8.
_LONG_COMPLEX = getattr(np, "complex256", np.complex128)


def _rk4_propagator(a: np.ndarray, h: float) -> np.ndarray:
    ha = h * a
    p2 = ha @ ha
    p3 = p2 @ ha
    p4 = p3 @ ha
    return np.eye(a.shape[0], dtype=a.dtype) + ha + p2 / 2.0 + p3 / 6.0 + p4 / 24.0


def _apply_propagator_power(r: np.ndarray, v: np.ndarray, n_steps: int) -> np.ndarray:
    # v <- R^n v by binary powering; log2(n) dense matmuls of a d^2 matrix.
    base = r
    k = n_steps
    while k:
        if k & 1:
            v = base @ v
        k >>= 1
        if k:
            base = base @ base
    return v


def time_evolve(
    rho0: np.ndarray,
    m: np.ndarray,
    decays: DecaySpec,
    duration: float,
    step: float,
) -> np.ndarray:
    """Fixed-step RK4 integration of the master equation.

    The RK4 update of this linear system is itself a linear map, so runs
    longer than _LOOP_STEP_LIMIT steps apply the one-step propagator by
    binary powering instead of stepping literally; both modes realize the
    same map up to roundoff. A trailing fractional step covers durations
    that are not multiples of ``step``. The result is symmetrized (per
    step in loop mode, once at the end in powering mode).
    """
    duration = _require_finite("duration", duration)
    step = _require_finite("step", step)
    if duration < 0:
        raise InvalidParameterError(f"duration must be >= 0, got {duration}")
    if step <= 0:
        raise InvalidParameterError(f"step must be > 0, got {step}")
    rho0 = validate_density_matrix(rho0)
    m = np.asarray(m, dtype=np.float64)
    g = np.asarray(decays.gamma, dtype=np.float64)
    gamma2 = g[1] if g.shape[0] > 1 else 0.0
    rate_scale = max(np.abs(m).max(), float(gamma2))
    if step * rate_scale >= 0.1:
        raise StepTooLargeError(
            f"step {step:.3e} s violates the stability bound "
            f"0.1 / {rate_scale:.3e} = {0.1 / rate_scale if rate_scale else math.inf:.3e} s"
        )
    if duration == 0.0:
        return rho0.copy()

    n_full = int(duration / step)
    remainder = duration - n_full * step
    if remainder < 0:  # guard against float-division overshoot
        n_full -= 1
        remainder = duration - n_full * step

    a = liouvillian_matrix(m, decays)
    n = m.shape[0]
    v = np.ascontiguousarray(rho0).reshape(-1).astype(np.complex128)

    if n_full > 0:
        if n_full <= _LOOP_STEP_LIMIT:
            v, _, unstable = rk4_step_loop(v, a, step, n_full)
            if unstable:
                raise StepTooLargeError("integration diverged (|rho| > 2); reduce step")
        else:
            r = _rk4_propagator(a.astype(_LONG_COMPLEX), step)
            v = _apply_propagator_power(r, v.astype(_LONG_COMPLEX), n_full)
            v = v.astype(np.complex128)
            if np.abs(v).max() > 2.0:
                raise StepTooLargeError("integration diverged (|rho| > 2); reduce step")
    if remainder > 1e-12 * step:
        v, _, unstable = rk4_step_loop(v, a, remainder, 1)
        if unstable:
            raise StepTooLargeError("integration diverged (|rho| > 2); reduce step")

    rho = v.reshape(n, n)
    return 0.5 * (rho + rho.conj().T)
