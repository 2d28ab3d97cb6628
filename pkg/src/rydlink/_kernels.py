"""Hot numerical kernels with a numba fast path and a numpy fallback.

Backend selection happens once at import time via the RYDLINK_NUMBA
environment variable:

    unset/empty  use numba when importable, else numpy
    "0"          force the pure-numpy fallback
    "1"          require numba (ImportError if unavailable)

``BACKEND`` records the choice ("numba" or "numpy").

Contract between the two backends:

- ``demod_count_errors`` is bitwise identical across backends. Both paths
  perform the same IEEE operations per element (gather, one multiply, one
  add, integer threshold comparisons), so symbol decisions and error
  counts cannot depend on the backend. Demodulation output files are
  therefore backend independent.
- ``rk4_step_loop`` agrees across backends to ~1e-12 elementwise, not
  bitwise: the numpy path uses BLAS matrix-vector products whose summation
  order differs from the numba scalar loops.
"""

import os

import numpy as np

__all__ = ["BACKEND", "rk4_step_loop", "demod_count_errors"]


def _rk4_step_loop_numpy(v0, a, h, n_steps):
    """Classic fixed-step RK4 on v' = a v with per-step symmetrization.

    v0 is the row-major flattening of a d x d matrix. Returns
    (v_final, steps_done, unstable); unstable=True means some element
    magnitude exceeded 2.0 and integration stopped early.
    """
    d = int(round(len(v0) ** 0.5))
    v = v0.astype(np.complex128, copy=True)
    for step in range(n_steps):
        k1 = a @ v
        k2 = a @ (v + (0.5 * h) * k1)
        k3 = a @ (v + (0.5 * h) * k2)
        k4 = a @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        m = v.reshape(d, d)
        m = 0.5 * (m + m.conj().T)
        v = np.ascontiguousarray(m).reshape(-1)
        if np.abs(v).max() > 2.0:
            return v, step + 1, True
    return v, n_steps, False


def _demod_count_errors_numpy(symbols, normals, levels, noise_coeff, thresholds_desc):
    """Count demodulation errors for one block of symbols.

    Per symbol u with unit normal z the noisy observable is
    levels[u] + noise_coeff[u]*z; the decision is the number of
    (descending) thresholds strictly above it. Equality with a threshold
    therefore resolves to the lower symbol index.
    """
    t = levels[symbols] + noise_coeff[symbols] * normals
    decisions = (t[:, None] < thresholds_desc[None, :]).sum(axis=1)
    return int(np.count_nonzero(decisions != symbols))


def _rk4_step_loop_scalar(v0, a, h, n_steps):
    # Same map as the numpy path, written with explicit loops so numba
    # compiles it to machine code without BLAS calls.
    dim = v0.shape[0]
    d = int(round(dim ** 0.5))
    v = v0.astype(np.complex128)
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    y = np.empty(dim, np.complex128)
    for step in range(n_steps):
        for p in range(dim):
            s = 0.0 + 0.0j
            for q in range(dim):
                s += a[p, q] * v[q]
            k1[p] = s
        for p in range(dim):
            y[p] = v[p] + (0.5 * h) * k1[p]
        for p in range(dim):
            s = 0.0 + 0.0j
            for q in range(dim):
                s += a[p, q] * y[q]
            k2[p] = s
        for p in range(dim):
            y[p] = v[p] + (0.5 * h) * k2[p]
        for p in range(dim):
            s = 0.0 + 0.0j
            for q in range(dim):
                s += a[p, q] * y[q]
            k3[p] = s
        for p in range(dim):
            y[p] = v[p] + h * k3[p]
        for p in range(dim):
            s = 0.0 + 0.0j
            for q in range(dim):
                s += a[p, q] * y[q]
            k4[p] = s
        for p in range(dim):
            v[p] = v[p] + (h / 6.0) * (k1[p] + 2.0 * (k2[p] + k3[p]) + k4[p])
        big = False
        for i in range(d):
            for j in range(i + 1, d):
                av = 0.5 * (v[i * d + j] + np.conj(v[j * d + i]))
                v[i * d + j] = av
                v[j * d + i] = np.conj(av)
            v[i * d + i] = complex(v[i * d + i].real, 0.0)
        for p in range(dim):
            if abs(v[p]) > 2.0:
                big = True
        if big:
            return v, step + 1, True
    return v, n_steps, False


def _demod_count_errors_scalar(symbols, normals, levels, noise_coeff, thresholds_desc):
    n = symbols.shape[0]
    n_thr = thresholds_desc.shape[0]
    errors = 0
    for i in range(n):
        u = symbols[i]
        t = levels[u] + noise_coeff[u] * normals[i]
        dec = 0
        for j in range(n_thr):
            if t < thresholds_desc[j]:
                dec += 1
        if dec != u:
            errors += 1
    return errors


def _pick_backend():
    flag = os.environ.get("RYDLINK_NUMBA", "").strip()
    if flag == "0":
        return "numpy", None
    try:
        import numba
    except ImportError:
        if flag == "1":
            raise ImportError(
                "RYDLINK_NUMBA=1 requires numba; install the [accel] extra"
            )
        return "numpy", None
    return "numba", numba


BACKEND, _numba = _pick_backend()

if BACKEND == "numba":
    _jit = _numba.njit(cache=True, fastmath=False)
    rk4_step_loop = _jit(_rk4_step_loop_scalar)
    demod_count_errors = _jit(_demod_count_errors_scalar)
else:
    rk4_step_loop = _rk4_step_loop_numpy
    demod_count_errors = _demod_count_errors_numpy
