"""Time the two hot kernels against their pure-numpy fallbacks.

The package selects a kernel backend once at import time (RYDLINK_NUMBA,
see rydlink._kernels). This script imports the selected backend plus the
private numpy reference implementations and times both on the same
workloads, checking the cross-backend contract on the way: demodulation
error counts must be bitwise identical, RK4 states equal to ~1e-12.

Run with numba available (the default install plus the [accel] extra):

    python3 benchmarks/compare_backends.py

Forcing RYDLINK_NUMBA=0 makes the comparison numpy-vs-numpy, which is
only useful as a sanity check that the harness itself is not the cost.
"""

import argparse
import time

import numpy as np

import rydlink as rl
from rydlink._kernels import (
    BACKEND,
    _demod_count_errors_numpy,
    _rk4_step_loop_numpy,
    demod_count_errors,
    rk4_step_loop,
)
from rydlink.core import liouvillian_matrix


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def rk4_workload(n_steps):
    # a representative strongly driven 5-level system; 25x25 Liouvillian
    drv = rl.DriveSet(
        rabi=(2e5, 1e7, 5e5, 3e5),
        detuning=(0.0, 2e6, -1e6, 5e5),
    )
    decays = rl.DecaySpec(gamma=(0.0, 3.7e7, 1.9e4, 1.3e4, 1.3e4))
    a = liouvillian_matrix(rl.build_interaction_matrix(drv), decays)
    h = 0.08 / np.abs(a).max()
    v0 = np.zeros(25, dtype=np.complex128)
    v0[0] = 1.0
    return v0, a, h, n_steps


def demod_workload(n_symbols, seed=7):
    levels = np.linspace(0.9, 0.2, 8)
    sigma = np.full(8, 0.02)
    thresholds = 0.5 * (levels[:-1] + levels[1:])
    rng = np.random.default_rng(seed)
    symbols = rng.integers(0, 8, size=n_symbols, dtype=np.int64)
    z = rng.standard_normal(n_symbols)
    return symbols, z, levels, sigma, thresholds


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=20000, help="RK4 steps per run")
    p.add_argument("--symbols", type=int, default=1 << 20, help="demod block size")
    p.add_argument("--repeats", type=int, default=5, help="best-of repetitions")
    args = p.parse_args()

    print(f"selected backend: {BACKEND}")
    if BACKEND != "numba":
        print("note: numba not active, timing numpy against itself")

    v0, a, h, n_steps = rk4_workload(args.steps)
    rk4_step_loop(v0, a, h, 2)  # trigger JIT before timing
    t_sel = best_of(lambda: rk4_step_loop(v0, a, h, n_steps), args.repeats)
    t_np = best_of(lambda: _rk4_step_loop_numpy(v0, a, h, n_steps), args.repeats)
    va, _, _ = rk4_step_loop(v0, a, h, n_steps)
    vb, _, _ = _rk4_step_loop_numpy(v0, a, h, n_steps)
    dev = np.abs(va - vb).max()
    if dev > 1e-12 * max(np.abs(vb).max(), 1.0):
        raise AssertionError(f"rk4 backends disagree: {dev:.3e}")
    print(
        f"rk4_step_loop     {n_steps} steps: "
        f"{BACKEND} {t_sel * 1e3:9.2f} ms, numpy {t_np * 1e3:9.2f} ms, "
        f"speedup {t_np / t_sel:5.1f}x, max dev {dev:.1e}"
    )

    sy, z, lv, sg, th = demod_workload(args.symbols)
    demod_count_errors(sy[:64], z[:64], lv, sg, th)
    t_sel = best_of(lambda: demod_count_errors(sy, z, lv, sg, th), args.repeats)
    t_np = best_of(lambda: _demod_count_errors_numpy(sy, z, lv, sg, th), args.repeats)
    na = demod_count_errors(sy, z, lv, sg, th)
    nb = _demod_count_errors_numpy(sy, z, lv, sg, th)
    if na != nb:
        raise AssertionError(f"demod backends disagree: {na} vs {nb}")
    print(
        f"demod_count_errors {args.symbols} symbols: "
        f"{BACKEND} {t_sel * 1e3:9.2f} ms, numpy {t_np * 1e3:9.2f} ms, "
        f"speedup {t_np / t_sel:5.1f}x, errors {na} (identical)"
    )


if __name__ == "__main__":
    main()
