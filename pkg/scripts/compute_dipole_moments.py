"""Electric dipole matrix elements for the Rb-85 ladder used in the example config.

Method
------
Radial wavefunctions are computed in the single-channel quantum-defect
(Coulomb) approximation: u''(r) = [l(l+1)/r^2 - 2/r - 2E] u(r) with
E = -1/(2 n*^2) Hartree, integrated inward with a Numerov scheme on a
uniform sqrt(r) grid (substitution r = x^2, u = sqrt(x) y turns the
equation into y'' = g(x) y with no first-derivative term).  The Coulomb
approximation is accurate at the percent level for Rydberg-Rydberg
integrals, which are dominated by radii far outside the ionic core; it
is only indicative (tens of percent) for transitions involving the 5P
valence state, which penetrates the core.

Quantum defects: delta(n) = delta0 + delta2/(n - delta0)^2 with the
modified-Ritz coefficients measured by Li, Mourachko, Noel and Gallagher
(PRA 67, 052502) and Han et al. (PRA 74, 054502) for the nF/nG series;
only S, P, D are needed here.

Angular factors use the standard spherical-tensor decomposition
  <n' l' j' m'| r_q |n l j m> = R(n'l'j', nlj) * A(l'j'm', ljm; q)
with A built from Wigner 3j/6j symbols (sympy.physics.wigner).  Signs
are dropped: only magnitudes matter for Rabi frequencies.

Run:  python scripts/compute_dipole_moments.py
"""

from __future__ import annotations

import numpy as np
from sympy import S
from sympy.physics.wigner import wigner_3j, wigner_6j

# CODATA 2018
HBAR = 1.054571817e-34      # J s
E_CHARGE = 1.602176634e-19  # C
A_BOHR = 5.29177210903e-11  # m
EA0 = E_CHARGE * A_BOHR     # C m per atomic unit of dipole moment
RYDBERG_HZ = 3.2898419602508e15  # c * R_inf, infinite-mass

# Modified-Ritz quantum defects for Rb (delta0, delta2)
QUANTUM_DEFECTS = {
    ("S", 0.5): (3.1311804, 0.1784),
    ("P", 0.5): (2.6548849, 0.2900),
    ("P", 1.5): (2.6416737, 0.2950),
    ("D", 1.5): (1.34809171, -0.60286),
    ("D", 2.5): (1.34646572, -0.59600),
}

L_OF = {"S": 0, "P": 1, "D": 2}


def n_star(n: int, series: str, j: float) -> float:
    d0, d2 = QUANTUM_DEFECTS[(series, j)]
    return n - d0 - d2 / (n - d0) ** 2


def level_energy_hz(n: int, series: str, j: float) -> float:
    """Binding energy as a (negative) frequency."""
    return -RYDBERG_HZ / n_star(n, series, j) ** 2


def radial_wavefunction(n: int, series: str, j: float, dx: float = 1e-3):
    """Numerov-integrated u(r) on a sqrt-spaced grid, normalized to 1.

    Returns (x, y) with r = x^2 and u(r) = sqrt(x) y(x); then
    integral u^2 dr = integral 2 x^2 y^2 dx.
    """
    ns = n_star(n, series, j)
    l = L_OF[series]
    energy = -0.5 / ns**2

    r_outer = 2.0 * ns * (ns + 15.0)
    r_inner = max(1.0, (l * (l + 1)) ** 0.5 * 0.1 + 1.0)
    x = np.arange(np.sqrt(r_inner), np.sqrt(r_outer), dx)
    r = x**2

    def g(xv, rv):
        f = l * (l + 1) / rv**2 - 2.0 / rv - 2.0 * energy
        return 4.0 * rv * f + 0.75 / xv**2

    gv = g(x, r)
    y = np.zeros_like(x)
    # two-point start in the classically forbidden tail
    y[-1] = 1e-12
    y[-2] = 2e-12
    c = dx * dx / 12.0
    for i in range(len(x) - 2, 0, -1):
        y[i - 1] = (
            (2.0 + 10.0 * c * gv[i]) * y[i] - (1.0 - c * gv[i + 1]) * y[i + 1]
        ) / (1.0 - c * gv[i - 1])
        if abs(y[i - 1]) > 1e250:  # rescale to avoid overflow while integrating
            y[: i] = 0.0
            y *= 1e-250
    norm = np.sqrt(np.trapezoid(2.0 * x**2 * y**2, dx=dx))
    return x, y / norm


def radial_integral_a0(state1, state2) -> float:
    """<u1| r |u2> in units of a0, on the common grid support."""
    x1, y1 = radial_wavefunction(*state1)
    x2, y2 = radial_wavefunction(*state2)
    n = min(len(x1), len(x2))
    # both grids start at the same r_inner when l-values give same cutoff;
    # align on the shorter one from the inner side
    lo1 = 0 if x1[0] <= x2[0] else int(round((x1[0] - x2[0]) / 1e-3))
    lo2 = 0 if x2[0] <= x1[0] else int(round((x2[0] - x1[0]) / 1e-3))
    m = min(len(x1) - lo1, len(x2) - lo2)
    xx = x1[lo1 : lo1 + m]
    return float(np.trapezoid(2.0 * xx**4 * y1[lo1 : lo1 + m] * y2[lo2 : lo2 + m], dx=1e-3))


def reduced_angular(l1: int, j1: float, l2: int, j2: float) -> float:
    """|<l2 j2 || C1 || l1 j1>| with spin 1/2."""
    lred = float(wigner_3j(S(l2), 1, S(l1), 0, 0, 0)) * np.sqrt((2 * l1 + 1) * (2 * l2 + 1))
    six = float(wigner_6j(S(l2), S(int(2 * j2)) / 2, S(1) / 2, S(int(2 * j1)) / 2, S(l1), 1))
    return abs(lred * six) * np.sqrt((2 * j1 + 1) * (2 * j2 + 1))


def component(l1, j1, m1, l2, j2, m2, radial_a0) -> float:
    """|<n2 l2 j2 m2| e r_q |n1 l1 j1 m1>| in ea0, q = m2 - m1."""
    q = m2 - m1
    if abs(q) > 1:
        return 0.0
    three = float(
        wigner_3j(S(int(2 * j2)) / 2, 1, S(int(2 * j1)) / 2, S(int(-2 * m2)) / 2, S(int(q)), S(int(2 * m1)) / 2)
    )
    return abs(three) * reduced_angular(l1, j1, l2, j2) * abs(radial_a0)


def report(label, s1, s2):
    f1 = level_energy_hz(*s1)
    f2 = level_energy_hz(*s2)
    rad = radial_integral_a0(s1, s2)
    red = reduced_angular(L_OF[s1[1]], s1[2], L_OF[s2[1]], s2[2]) * abs(rad)
    print(f"\n{label}: {s1[0]}{s1[1]}{s1[2]} -> {s2[0]}{s2[1]}{s2[2]}")
    print(f"  transition frequency : {abs(f2 - f1) / 1e9:.3f} GHz")
    print(f"  radial integral      : {rad:+.1f} a0")
    print(f"  reduced <||er||>     : {red:.1f} ea0")
    l1, j1 = L_OF[s1[1]], s1[2]
    l2, j2 = L_OF[s2[1]], s2[2]
    for m1 in np.arange(0.5, j1 + 0.5):
        for q in (-1, 0, 1):
            m2 = m1 + q
            if abs(m2) > j2:
                continue
            val = component(l1, j1, m1, l2, j2, m2, rad)
            if val > 0:
                print(
                    f"  |<{s2[0]}{s2[1]}{j2}, mj={m2:+.1f}| er_{q:+d} |{s1[0]}{s1[1]}{j1}, mj={m1:+.1f}>|"
                    f" = {val:8.2f} ea0 = {val * EA0:.4e} C m"
                )
    return rad


def main():
    print("Rb-85 quantum-defect dipole calculator (Coulomb approximation)")
    print("==============================================================")
    for n, series, j in [(53, "D", 2.5), (54, "P", 1.5), (52, "D", 2.5), (5, "P", 1.5), (5, "S", 0.5)]:
        print(f"  n*({n}{series}{j}) = {n_star(n, series, j):.5f}")

    report("RF transition", (53, "D", 2.5), (54, "P", 1.5))
    report("interference transition", (54, "P", 1.5), (52, "D", 2.5))
    report("coupling transition (core-penetrating: indicative only)", (5, "P", 1.5), (53, "D", 2.5))
    print(
        "\nprobe transition 5S1/2 -> 5P3/2: core-penetrating, Coulomb approximation"
        "\nis unreliable; the config ships the measured D2 cycling component"
        "\n|<F=3,mF=3| er |F'=4,mF'=4>| = 2.989 ea0 (reduced element 4.227 ea0,"
        "\nRb D-line spectroscopy, Steck alkali data)."
    )


if __name__ == "__main__":
    main()
