"""Backend contract: numba fast path vs the numpy fallback."""

import numpy as np
import pytest

import rydlink as rl
from rydlink import _kernels
from rydlink._kernels import (
    BACKEND,
    _demod_count_errors_numpy,
    _demod_count_errors_scalar,
    _rk4_step_loop_numpy,
    demod_count_errors,
    rk4_step_loop,
)


def test_backend_identifies_itself():
    assert BACKEND in ("numba", "numpy")
    assert _kernels.__all__ == ["BACKEND", "rk4_step_loop", "demod_count_errors"]


class TestDemodKernel:
    def make_block(self, seed, n=4096, m=8):
        rng = np.random.Generator(np.random.Philox(seed))
        symbols = rng.integers(0, m, size=n, dtype=np.int64)
        normals = rng.standard_normal(n)
        levels = np.sort(rng.uniform(0.1, 0.9, size=m))[::-1].copy()
        coeff = rng.uniform(0.005, 0.02, size=m)
        thresholds = 0.5 * (levels[:-1] + levels[1:])
        return symbols, normals, levels, coeff, thresholds

    @pytest.mark.parametrize("seed", [1, 7, 2024])
    def test_backends_bitwise_identical(self, seed):
        # same IEEE ops per element in every path, so the counts are
        # integers that must match exactly, not approximately
        block = self.make_block(seed)
        active = demod_count_errors(*block)
        assert active == _demod_count_errors_numpy(*block)
        assert active == _demod_count_errors_scalar(*block)
        assert 0 < active < block[0].shape[0]

    def test_threshold_tie_counts_against_upper_symbol(self):
        # a noisy value exactly on a threshold decodes to the lower index
        levels = np.array([0.9, 0.7])
        coeff = np.zeros(2)
        thresholds = np.array([0.7])
        symbols = np.array([0, 1], dtype=np.int64)
        normals = np.zeros(2)
        # symbol 1 lands exactly on the threshold and decodes as 0: one error
        assert demod_count_errors(symbols, normals, levels, coeff, thresholds) == 1
        assert _demod_count_errors_numpy(symbols, normals, levels, coeff, thresholds) == 1

    def test_zero_noise_zero_errors(self):
        levels = np.array([0.8, 0.6, 0.4, 0.2])
        thresholds = 0.5 * (levels[:-1] + levels[1:])
        symbols = np.arange(4, dtype=np.int64).repeat(10)
        zeros = np.zeros(symbols.shape[0])
        assert demod_count_errors(symbols, zeros, levels, np.zeros(4), thresholds) == 0


class TestRk4Kernel:
    def physical_system(self):
        drv = rl.DriveSet(
            rabi=(2e5, 1e7, 5e5, 0.0),
            detuning=(0.0, 2e6, -1e6, 0.0),
        )
        decays = rl.DecaySpec(gamma=(0.0, 3.7e7, 1.9e4, 1.3e4, 1.3e4))
        m = rl.build_interaction_matrix(drv)
        a = rl.liouvillian_matrix(m, decays).astype(np.complex128)
        rho0 = np.zeros((5, 5), dtype=np.complex128)
        rho0[0, 0] = 1.0
        return a, rho0.reshape(-1)

    def test_backends_agree_elementwise(self):
        a, v0 = self.physical_system()
        h = 0.08 / max(np.abs(a).max() / 25, 1.0)  # comfortably stable
        v_act, n_act, bad_act = rk4_step_loop(v0, a, h, 200)
        v_ref, n_ref, bad_ref = _rk4_step_loop_numpy(v0, a, h, 200)
        assert n_act == n_ref == 200
        assert not bad_act and not bad_ref
        scale = np.abs(v_ref).max()
        assert np.abs(v_act - v_ref).max() <= 2e-12 * scale

    def test_unstable_flag_stops_early(self):
        # pure growth: every RK4 step multiplies by r(h*lambda) >> 1
        a = (1e3 + 0j) * np.eye(25, dtype=np.complex128)
        v0 = (np.eye(5, dtype=np.complex128) / 5.0).reshape(-1)
        v, steps, unstable = rk4_step_loop(v0, a, 1e-2, 50)
        assert unstable
        assert steps < 50
        v_ref, steps_ref, unstable_ref = _rk4_step_loop_numpy(v0, a, 1e-2, 50)
        assert unstable_ref and steps_ref == steps

    def test_preserves_hermitian_structure(self):
        a, v0 = self.physical_system()
        h = 0.08 / max(np.abs(a).max() / 25, 1.0)
        v, _, _ = rk4_step_loop(v0, a, h, 50)
        rho = v.reshape(5, 5)
        assert np.abs(rho - rho.conj().T).max() == 0.0
        assert abs(rho.trace().imag) < 1e-15
