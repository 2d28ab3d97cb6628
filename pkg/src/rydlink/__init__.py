"""Numerical model of a five-level Rydberg-ladder RF receiver.

Builds the driven-ladder interaction matrix, solves the open-system
dynamics for the probe coherence (dense steady state, time evolution, and
weak-probe closed forms), converts coherence to cell transmission, adds
the intrinsic field-noise model, and estimates amplitude-keyed link error
rates against a filtered-envelope baseline.
"""

from .constants import EA0, FREE_SPACE_IMPEDANCE, HBAR, N_LEVELS, TWO_PI
from .errors import (
    ConfigError,
    DemodulationInfeasibleError,
    InvalidCoherenceError,
    InvalidParameterError,
    NoSplittingError,
    NumericalError,
    RydlinkError,
    SingularSystemError,
    StepTooLargeError,
)
from .core import (
    DecaySpec,
    DriveSet,
    LevelScheme,
    build_interaction_matrix,
    decay_map,
    liouvillian_matrix,
    master_rhs,
    rabi_from_field,
    steady_state,
    time_evolve,
    validate_density_matrix,
)
from .weakprobe import (
    WeakProbeResult,
    ac_stark_shift,
    rho21_exact_weakprobe,
    rho21_stark_approx,
    solve_weakprobe_linear_system,
)
from .scenario import CellSpec, LadderConfig
from .spectroscopy import (
    ENGINES,
    SpectrumTrace,
    beer_lambert_transmission,
    default_delta_c_grid,
    find_amplitude_extremum,
    find_ats_splitting,
    sweep_spectrum,
    transmission_at,
)
from .noise import (
    NoiseSpec,
    projection_min_field,
    sample_noisy_transmission,
    total_noise_sigma,
    transmission_slope,
    uncertainty_variance,
)
from .link import (
    ConventionalRxSpec,
    LinkOperatingPoint,
    PamLinkConfig,
    SerEstimate,
    calibrated_readout_detuning,
    calibration_reference,
    conventional_ser,
    decision_thresholds,
    demodulate,
    effective_antenna_area,
    estimate_ser_rydberg,
    interference_energy_after_filter,
    q_function,
    reference_levels,
    symbol_energy,
    thermal_noise_energy,
    wilson_interval,
)
from .config import (
    ScenarioConfig,
    config_digest,
    load_config,
    parse_config,
    parse_quantity,
    serialize_config,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # constants
    "EA0",
    "FREE_SPACE_IMPEDANCE",
    "HBAR",
    "N_LEVELS",
    "TWO_PI",
    # errors
    "RydlinkError",
    "InvalidParameterError",
    "ConfigError",
    "NumericalError",
    "SingularSystemError",
    "StepTooLargeError",
    "NoSplittingError",
    "InvalidCoherenceError",
    "DemodulationInfeasibleError",
    # core
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
    # weak probe
    "WeakProbeResult",
    "rho21_exact_weakprobe",
    "rho21_stark_approx",
    "ac_stark_shift",
    "solve_weakprobe_linear_system",
    # scenario
    "CellSpec",
    "LadderConfig",
    # spectroscopy
    "ENGINES",
    "SpectrumTrace",
    "beer_lambert_transmission",
    "transmission_at",
    "sweep_spectrum",
    "default_delta_c_grid",
    "find_amplitude_extremum",
    "find_ats_splitting",
    # noise
    "NoiseSpec",
    "uncertainty_variance",
    "projection_min_field",
    "total_noise_sigma",
    "transmission_slope",
    "sample_noisy_transmission",
    # link
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
    # config
    "ScenarioConfig",
    "parse_quantity",
    "parse_config",
    "load_config",
    "serialize_config",
    "config_digest",
]
