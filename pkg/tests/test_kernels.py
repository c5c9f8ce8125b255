"""Accelerated kernels vs their plain-numpy twins, plus the opt-out flag."""

import os
import subprocess
import sys

import numpy as np
import pytest

from hyperwell import _kernels as K


def random_tridiag(rng, n):
    diag = rng.normal(size=n) * 3.0
    off = rng.normal(size=n - 1)
    return diag, off


class TestSturmCounts:
    def test_count_is_correct_vs_dense_eigvals(self):
        rng = np.random.default_rng(88)
        for _ in range(20):
            n = int(rng.integers(8, 40))
            diag, off = random_tridiag(rng, n)
            mat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
            evs = np.linalg.eigvalsh(mat)
            shifts = np.sort(rng.normal(size=5) * 4.0)
            counts = K.sturm_counts_numpy(diag, off * off, shifts, 1e-300)
            for s, c in zip(shifts, counts):
                assert c == int(np.sum(evs < s))

    @pytest.mark.skipif(K.sturm_counts_jit is None, reason="jit unavailable")
    def test_jit_matches_numpy(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            n = int(rng.integers(16, 200))
            diag, off = random_tridiag(rng, n)
            shifts = np.sort(rng.normal(size=7) * 5.0)
            a = K.sturm_counts_numpy(diag, off * off, shifts, 1e-300)
            b = K.sturm_counts_jit(diag, off * off, shifts, 1e-300)
            assert np.array_equal(np.asarray(a), np.asarray(b))


class TestNumerovScan:
    @staticmethod
    def harmonic_f(E, n=2001, r_max=10.0):
        r = np.linspace(1e-6, r_max, n)
        h = r[1] - r[0]
        return r * r - E, h * h

    def test_node_count_brackets_levels(self):
        # between oscillator levels 3 and 7 the sweep gains exactly one node
        f_lo, h2 = self.harmonic_f(5.0)
        f_hi, _ = self.harmonic_f(9.0)
        nodes_lo, _, ok_lo = K.numerov_scan_numpy(f_lo, h2, 0.0, 1e-8)
        nodes_hi, _, ok_hi = K.numerov_scan_numpy(f_hi, h2, 0.0, 1e-8)
        assert ok_lo == 1.0 and ok_hi == 1.0
        assert nodes_hi - nodes_lo == 1

    @pytest.mark.skipif(K.numerov_scan_jit is None, reason="jit unavailable")
    def test_jit_matches_numpy_bitwise(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            E = float(rng.uniform(0.0, 20.0))
            f, h2 = self.harmonic_f(E, n=int(rng.integers(64, 2000)))
            a = K.numerov_scan_numpy(f, h2, 0.0, 1e-8)
            b = K.numerov_scan_jit(f, h2, 0.0, 1e-8)
            assert a[0] == b[0]
            assert a[1] == b[1]  # bitwise: identical arithmetic
            assert a[2] == b[2]

    @pytest.mark.skipif(K.numerov_array_jit is None, reason="jit unavailable")
    def test_array_variant_matches(self):
        f, h2 = self.harmonic_f(7.0, n=500)
        out_a = np.zeros_like(f)
        out_b = np.zeros_like(f)
        ra = K.numerov_array_numpy(f, h2, 0.0, 1e-8, out_a)
        rb = K.numerov_array_jit(f, h2, 0.0, 1e-8, out_b)
        assert ra == rb
        assert np.array_equal(out_a, out_b)

    def test_rescale_keeps_finite(self):
        # a deeply classically forbidden sweep grows ~ exp(kappa r); the
        # rescaling must keep the recurrence finite and ok = 1
        r = np.linspace(1e-6, 50.0, 20001)
        h2 = (r[1] - r[0]) ** 2
        f = np.full_like(r, 400.0)  # u'' = 400 u: growth e^(20 r), ~e^1000 total
        nodes, u_last, ok = K.numerov_scan_numpy(f, h2, 0.0, 1e-8)
        assert ok == 1.0
        assert np.isfinite(u_last)
        assert nodes == 0


class TestInverseIteration:
    def test_eigenvector_residual(self):
        rng = np.random.default_rng(3)
        n = 200
        diag, off = random_tridiag(rng, n)
        mat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        evs = np.linalg.eigvalsh(mat)
        target = evs[3]
        vec = K.inverse_iteration_numpy(diag, off, target + 1e-9)
        vec = np.asarray(vec)
        assert np.linalg.norm(vec) == pytest.approx(1.0, rel=1e-10)
        resid = np.linalg.norm(mat @ vec - target * vec)
        assert resid < 1e-6

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        diag, off = random_tridiag(rng, 64)
        a = np.asarray(K.inverse_iteration_numpy(diag, off, 0.1))
        b = np.asarray(K.inverse_iteration_numpy(diag, off, 0.1))
        assert np.array_equal(a, b)

    def test_sign_convention(self):
        rng = np.random.default_rng(5)
        diag, off = random_tridiag(rng, 64)
        vec = np.asarray(K.inverse_iteration_numpy(diag, off, 0.0))
        assert vec[np.argmax(np.abs(vec))] > 0.0


class TestJitFlag:
    def test_bindings_consistent(self):
        if K.HAVE_JIT:
            assert K.sturm_counts is K.sturm_counts_jit
            assert K.numerov_scan is K.numerov_scan_jit
        else:
            assert K.sturm_counts is K.sturm_counts_numpy
            assert K.numerov_scan is K.numerov_scan_numpy

    def test_disable_flag_subprocess(self):
        env = dict(os.environ, HYPERWELL_DISABLE_JIT="1")
        code = (
            "from hyperwell import _kernels as K; "
            "assert not K.JIT_REQUESTED; "
            "assert not K.HAVE_JIT; "
            "assert K.sturm_counts is K.sturm_counts_numpy; "
            "assert K.sturm_counts_jit is None; "
            "import hyperwell, math; "
            "from hyperwell.oracle import RadialGrid, fd_spectrum; "
            "from hyperwell.potential import PhysicalConstants; "
            "import numpy as np; "
            "spec = fd_spectrum(lambda r: np.zeros_like(np.asarray(r, float)), 0, "
            "PhysicalConstants(1.0, 0.5), RadialGrid(1e-9, 1.0, 500), 1); "
            "assert abs(spec.levels[0][1] - math.pi**2) / math.pi**2 < 1e-4"
        )
        proc = subprocess.run([sys.executable, "-c", code], env=env,
                              capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr

    def test_fallback_spectrum_agrees_with_bound(self):
        # the numpy twins drive the same oracle arithmetic as the bound kernels
        import math
        from hyperwell.oracle import RadialGrid, fd_spectrum
        from hyperwell.potential import PhysicalConstants

        grid = RadialGrid(1e-9, 1.0, 800)
        consts = PhysicalConstants(1.0, 0.5)
        spec = fd_spectrum(
            lambda r: np.zeros_like(np.asarray(r, dtype=float)), 0, consts, grid, 2)
        diag_e = [lv[1] for lv in spec.levels]
        assert diag_e[0] == pytest.approx(math.pi**2, rel=1e-4)
        assert diag_e[1] == pytest.approx(4 * math.pi**2, rel=1e-4)
