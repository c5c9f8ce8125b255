#!/usr/bin/env python3
"""Benchmark the accelerated oracle kernels against their plain-numpy twins.

Times the three hot paths of the numeric oracle -- Sturm eigenvalue counting,
the Numerov sweep, and inverse iteration driven end-to-end through
fd_spectrum -- once with the jit-compiled kernels and once with the numpy
fallbacks that HYPERWELL_DISABLE_JIT=1 selects.

Usage:
    python benchmarks/benchmark_kernels.py [--points N] [--repeats K]

The first jit call includes compilation; a warmup pass runs every kernel
before any timer starts, so the medians compare steady-state throughput.
"""

import argparse
import statistics
import time
from dataclasses import dataclass

import numpy as np

from hyperwell import _kernels as K
from hyperwell.oracle import RadialGrid, fd_spectrum, numerov_spectrum
from hyperwell.potential import PhysicalConstants

CONSTS = PhysicalConstants(hbar=1.0, mass=0.5)


@dataclass
class BenchmarkResult:
    name: str
    jit_median: float
    numpy_median: float

    @property
    def speedup(self) -> float:
        return self.numpy_median / self.jit_median if self.jit_median > 0 else float("nan")

    def row(self) -> str:
        return (f"{self.name:<34} {self.jit_median * 1e3:>10.3f} ms "
                f"{self.numpy_median * 1e3:>10.3f} ms {self.speedup:>8.2f}x")


def median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_sturm(n_points, repeats):
    rng = np.random.default_rng(1)
    diag = rng.normal(size=n_points) * 4.0
    off2 = rng.normal(size=n_points - 1) ** 2
    shifts = np.linspace(-10.0, 10.0, 64)

    K.sturm_counts_jit(diag, off2, shifts, 1e-300)  # warmup/compile
    jit_t = median_time(lambda: K.sturm_counts_jit(diag, off2, shifts, 1e-300), repeats)
    np_t = median_time(lambda: K.sturm_counts_numpy(diag, off2, shifts, 1e-300), repeats)
    a = np.asarray(K.sturm_counts_jit(diag, off2, shifts, 1e-300))
    b = np.asarray(K.sturm_counts_numpy(diag, off2, shifts, 1e-300))
    assert np.array_equal(a, b), "kernel disagreement"
    return BenchmarkResult("sturm_counts (64 shifts)", jit_t, np_t)


def bench_numerov(n_points, repeats):
    r = np.linspace(1e-6, 10.0, n_points)
    h2 = (r[1] - r[0]) ** 2
    f = r * r - 7.0

    K.numerov_scan_jit(f, h2, 0.0, 1e-8)  # warmup/compile
    jit_t = median_time(lambda: K.numerov_scan_jit(f, h2, 0.0, 1e-8), repeats)
    np_t = median_time(lambda: K.numerov_scan_numpy(f, h2, 0.0, 1e-8), repeats)
    assert K.numerov_scan_jit(f, h2, 0.0, 1e-8) == K.numerov_scan_numpy(f, h2, 0.0, 1e-8)
    return BenchmarkResult("numerov_scan (one sweep)", jit_t, np_t)


def bench_spectrum_end_to_end(n_points, repeats):
    """fd + numerov oracles on the oscillator, kernels swapped via rebinding."""
    import hyperwell.oracle as oracle_mod

    grid = RadialGrid(1e-6, 10.0, n_points)
    pot = lambda r: np.asarray(r, dtype=float) ** 2

    def run():
        fd_spectrum(pot, 0, CONSTS, grid, 3)
        numerov_spectrum(pot, 0, CONSTS, grid, (0.5, 13.0), 3)

    saved = (oracle_mod._kernels.sturm_counts, oracle_mod._kernels.numerov_scan,
             oracle_mod._kernels.numerov_array)
    try:
        oracle_mod._kernels.sturm_counts = K.sturm_counts_jit
        oracle_mod._kernels.numerov_scan = K.numerov_scan_jit
        oracle_mod._kernels.numerov_array = K.numerov_array_jit
        run()  # warmup/compile
        jit_t = median_time(run, repeats)

        oracle_mod._kernels.sturm_counts = K.sturm_counts_numpy
        oracle_mod._kernels.numerov_scan = K.numerov_scan_numpy
        oracle_mod._kernels.numerov_array = K.numerov_array_numpy
        np_t = median_time(run, repeats)
    finally:
        (oracle_mod._kernels.sturm_counts, oracle_mod._kernels.numerov_scan,
         oracle_mod._kernels.numerov_array) = saved
    return BenchmarkResult(f"oracle end-to-end ({n_points} pts)", jit_t, np_t)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=4000,
                        help="grid size for the kernel benchmarks (default 4000)")
    parser.add_argument("--repeats", type=int, default=9,
                        help="timed repetitions per case; medians reported (default 9)")
    args = parser.parse_args()

    if not K.HAVE_JIT:
        raise SystemExit(
            "jit kernels unavailable (numba missing or HYPERWELL_DISABLE_JIT=1); "
            "nothing to compare")

    print(f"grid points: {args.points}, repeats: {args.repeats} (medians)\n")
    print(f"{'kernel':<34} {'jit':>13} {'numpy':>13} {'speedup':>9}")
    print("-" * 72)
    for result in (
        bench_sturm(args.points, args.repeats),
        bench_numerov(args.points, args.repeats),
        bench_spectrum_end_to_end(args.points, args.repeats),
    ):
        print(result.row())


if __name__ == "__main__":
    main()
