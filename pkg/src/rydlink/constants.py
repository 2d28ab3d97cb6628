"""Physical constants (CODATA 2018) and fixed model conventions."""

import math

HBAR = 1.054571817e-34
"""Reduced Planck constant, J*s."""

EPSILON_0 = 8.8541878128e-12
"""Vacuum permittivity, F/m."""

K_BOLTZMANN = 1.380649e-23
"""Boltzmann constant, J/K (exact)."""

C_LIGHT = 299792458.0
"""Speed of light in vacuum, m/s (exact)."""

E_CHARGE = 1.602176634e-19
"""Elementary charge, C (exact)."""

A_BOHR = 5.29177210903e-11
"""Bohr radius, m."""

EA0 = E_CHARGE * A_BOHR
"""Atomic unit of electric dipole moment e*a0, C*m."""

FREE_SPACE_IMPEDANCE = 377.0
"""Free-space impedance used by the antenna formulas, ohm.

The conventional-receiver energy chain uses the rounded engineering value
rather than mu0*c, so that the documented formulas reproduce exactly.
"""

TWO_PI = 2.0 * math.pi

N_LEVELS = 5
"""Ladder length of the modeled atomic system."""
