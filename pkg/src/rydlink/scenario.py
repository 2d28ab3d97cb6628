"""Full physical scenario: cell geometry plus fields, detunings, decays."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import DecaySpec, DriveSet, LevelScheme, rabi_from_field
from .errors import InvalidParameterError

__all__ = ["CellSpec", "LadderConfig"]


@dataclass(frozen=True)
class CellSpec:
    """Vapor-cell parameters entering the Beer-Lambert exponent."""

    atomic_density: float  # atoms/m^3
    cell_length: float  # m
    probe_dipole: float  # C*m
    probe_wavelength: float  # m

    def __post_init__(self):
        for name in ("atomic_density", "cell_length", "probe_dipole", "probe_wavelength"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidParameterError(f"CellSpec.{name} must be strictly positive, got {v!r}")


@dataclass(frozen=True)
class LadderConfig:
    """Everything needed to evaluate one transmission value.

    Field amplitudes are peak values in V/m; detunings in rad/s. The
    coupling-laser detuning stored here is a base value that sweeps and
    readout override per evaluation point.
    """

    levels: LevelScheme
    probe_field: float
    coupling_field: float
    rf_field: float
    interference_field: float
    delta_p: float
    delta_c: float
    delta_rf: float
    delta_i: float
    decays: DecaySpec
    atomic_density: float
    cell_length: float

    def __post_init__(self):
        for name in ("probe_field", "coupling_field", "rf_field", "interference_field"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise InvalidParameterError(f"LadderConfig.{name} must be >= 0, got {v!r}")
        if self.probe_field <= 0:
            raise InvalidParameterError("probe_field must be strictly positive")
        for name in ("delta_p", "delta_c", "delta_rf", "delta_i"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParameterError(f"LadderConfig.{name} must be finite, got {v!r}")
        for name in ("atomic_density", "cell_length"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidParameterError(f"LadderConfig.{name} must be strictly positive, got {v!r}")

    @property
    def cell(self) -> CellSpec:
        return CellSpec(
            atomic_density=self.atomic_density,
            cell_length=self.cell_length,
            probe_dipole=self.levels.dipole(1, 2),
            probe_wavelength=self.levels.probe_wavelength,
        )

    def drives(
        self,
        *,
        delta_c: float | None = None,
        rf_field: float | None = None,
        interference_field: float | None = None,
    ) -> DriveSet:
        """DriveSet at this operating point, with optional overrides."""
        dc = self.delta_c if delta_c is None else float(delta_c)
        e_rf = self.rf_field if rf_field is None else float(rf_field)
        e_i = self.interference_field if interference_field is None else float(interference_field)
        lv = self.levels
        omega_rf = rabi_from_field(lv.dipole(3, 4), e_rf) if e_rf > 0 else 0.0
        omega_i = rabi_from_field(lv.dipole(4, 5), e_i) if e_i > 0 else 0.0
        return DriveSet(
            rabi=(
                rabi_from_field(lv.dipole(1, 2), self.probe_field),
                rabi_from_field(lv.dipole(2, 3), self.coupling_field)
                if self.coupling_field > 0
                else 0.0,
                omega_rf,
                omega_i,
            ),
            detuning=(self.delta_p, dc, self.delta_rf, self.delta_i),
        )

    def with_fields(self, **overrides) -> "LadderConfig":
        """Copy with replaced attributes (dataclasses.replace passthrough)."""
        return replace(self, **overrides)
