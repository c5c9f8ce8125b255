"""Hot numerical kernels with an optional JIT path.

Every kernel exists twice: a plain NumPy/Python implementation and a
numba-compiled version of the same loop. The compiled path is used when
numba imports cleanly and the environment variable HYPERWELL_DISABLE_JIT
is not set to "1"; both variants stay importable so they can be compared
directly (see benchmarks/benchmark_kernels.py).

All kernels are pure real arithmetic over contiguous float64 arrays.
"""

from __future__ import annotations

import os

import numpy as np

JIT_REQUESTED = os.environ.get("HYPERWELL_DISABLE_JIT", "") != "1"

try:
    if not JIT_REQUESTED:
        raise ImportError("JIT disabled by environment")
    from numba import njit as _njit

    HAVE_JIT = True
except ImportError:
    HAVE_JIT = False
    _njit = None

_RESCALE_AT = 1e100
_NODE_EPS = 1e-8  # node counting ignores |u| below this fraction of the running max


# ---------------------------------------------------------------------------
# Sturm sequence eigenvalue counts
# ---------------------------------------------------------------------------

def sturm_counts_numpy(diag, off2, shifts, pivmin):
    """Eigenvalues of the symmetric tridiagonal (diag, off) below each shift.

    off2 holds the squared off-diagonal entries. Vectorized across shifts:
    one LDL^T pivot recurrence per matrix row, all shifts in lockstep.
    """
    shifts = np.asarray(shifts, dtype=np.float64)
    q = diag[0] - shifts
    np.copyto(q, -pivmin, where=np.abs(q) < pivmin)
    counts = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = diag[i] - shifts - off2[i - 1] / q
        np.copyto(q, -pivmin, where=np.abs(q) < pivmin)
        counts += q < 0.0
    return counts


def _sturm_counts_loop(diag, off2, shifts, pivmin):
    n = diag.shape[0]
    m = shifts.shape[0]
    counts = np.zeros(m, dtype=np.int64)
    for j in range(m):
        s = shifts[j]
        q = diag[0] - s
        if abs(q) < pivmin:
            q = -pivmin
        c = 1 if q < 0.0 else 0
        for i in range(1, n):
            q = diag[i] - s - off2[i - 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0.0:
                c += 1
        counts[j] = c
    return counts


# ---------------------------------------------------------------------------
# Numerov outward sweep: node/terminal scan and full-array integration
# ---------------------------------------------------------------------------

def _numerov_scan_py(f, h2, u0, u1):
    """Integrate u'' = f u outward; return (sign-change count, u_last, ok).

    Counts sign changes over the whole sweep, thresholded at _NODE_EPS of
    the running amplitude. Rescales by _RESCALE_AT on overflow; ok = 0.0
    signals a non-finite value that rescaling cannot repair.
    """
    n = f.shape[0]
    c_prev = 1.0 - h2 * f[0] / 12.0
    c_cur = 1.0 - h2 * f[1] / 12.0
    up, uc = u0, u1
    umax = max(abs(up), abs(uc), 1e-300)
    nodes = 0
    last_sign = 0
    if abs(up) > _NODE_EPS * umax:
        last_sign = 1 if up > 0.0 else -1
    if abs(uc) > _NODE_EPS * umax:
        s = 1 if uc > 0.0 else -1
        if last_sign != 0 and s != last_sign:
            nodes += 1
        last_sign = s
    for j in range(1, n - 1):
        c_next = 1.0 - h2 * f[j + 1] / 12.0
        un = (2.0 * uc * (1.0 + 5.0 * h2 * f[j] / 12.0) - up * c_prev) / c_next
        if not np.isfinite(un):
            return nodes, 0.0, 0.0
        if abs(un) > _RESCALE_AT:
            un /= _RESCALE_AT
            uc /= _RESCALE_AT
            umax /= _RESCALE_AT
            if umax < 1e-300:
                umax = 1e-300
            if not np.isfinite(un):
                return nodes, 0.0, 0.0
        up, uc = uc, un
        c_prev, c_cur = c_cur, c_next
        if abs(uc) > umax:
            umax = abs(uc)
        if abs(uc) > _NODE_EPS * umax:
            s = 1 if uc > 0.0 else -1
            if last_sign != 0 and s != last_sign:
                nodes += 1
            last_sign = s
    return nodes, uc, 1.0


def _numerov_array_py(f, h2, u0, u1, out):
    """As the scan, but records the sweep in out (rescaled consistently)."""
    n = f.shape[0]
    out[0] = u0
    out[1] = u1
    c_prev = 1.0 - h2 * f[0] / 12.0
    c_cur = 1.0 - h2 * f[1] / 12.0
    up, uc = u0, u1
    for j in range(1, n - 1):
        c_next = 1.0 - h2 * f[j + 1] / 12.0
        un = (2.0 * uc * (1.0 + 5.0 * h2 * f[j] / 12.0) - up * c_prev) / c_next
        if not np.isfinite(un):
            return 0.0
        if abs(un) > _RESCALE_AT:
            for i in range(j + 1):
                out[i] /= _RESCALE_AT
            un /= _RESCALE_AT
            uc /= _RESCALE_AT
            if not np.isfinite(un):
                return 0.0
        up, uc = uc, un
        c_prev, c_cur = c_cur, c_next
        out[j + 1] = uc
    return 1.0


# ---------------------------------------------------------------------------
# Tridiagonal solve and inverse iteration
# ---------------------------------------------------------------------------

def _thomas_py(diag, off, rhs, pivmin, out, work):
    """Solve (tridiag(diag, off)) x = rhs in place; tiny pivots are nudged."""
    n = diag.shape[0]
    w = work
    w[0] = diag[0]
    if abs(w[0]) < pivmin:
        w[0] = pivmin if w[0] >= 0.0 else -pivmin
    out[0] = rhs[0]
    for i in range(1, n):
        m = off[i - 1] / w[i - 1]
        w[i] = diag[i] - m * off[i - 1]
        if abs(w[i]) < pivmin:
            w[i] = pivmin if w[i] >= 0.0 else -pivmin
        out[i] = rhs[i] - m * out[i - 1]
    out[n - 1] /= w[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = (out[i] - off[i] * out[i + 1]) / w[i]
    return out


def inverse_iteration_numpy(diag, off, shift, iters=3, seed=20201):
    """Eigenvector of tridiag(diag, off) nearest the shift, unit 2-norm.

    Deterministic LCG start vector; the sign convention makes the largest
    magnitude component positive.
    """
    n = diag.shape[0]
    scale = float(np.max(np.abs(diag)) + 2.0 * np.max(np.abs(off), initial=0.0))
    pivmin = max(1e-300, 1e-14 * scale) * 1e-6
    d = np.asarray(diag, dtype=np.float64) - shift
    v = _lcg_vector(n, seed)
    v /= np.linalg.norm(v)
    out = np.empty(n)
    work = np.empty(n)
    for _ in range(iters):
        _thomas_py(d, off, v, pivmin, out, work)
        nrm = np.linalg.norm(out)
        if not np.isfinite(nrm) or nrm == 0.0:
            break
        v = out / nrm
        out = np.empty(n)
    i = int(np.argmax(np.abs(v)))
    if v[i] < 0.0:
        v = -v
    return v


def _lcg_vector(n, seed):
    state = np.int64(seed)
    v = np.empty(n)
    for i in range(n):
        state = (np.int64(1103515245) * state + np.int64(12345)) % np.int64(2147483648)
        v[i] = float(state) / 2147483648.0 - 0.5
    return v


# ---------------------------------------------------------------------------
# JIT bindings
# ---------------------------------------------------------------------------

if HAVE_JIT:
    sturm_counts_jit = _njit(cache=True)(_sturm_counts_loop)
    numerov_scan_jit = _njit(cache=True)(_numerov_scan_py)
    numerov_array_jit = _njit(cache=True)(_numerov_array_py)

    sturm_counts = sturm_counts_jit
    numerov_scan = numerov_scan_jit
    numerov_array = numerov_array_jit
else:
    sturm_counts_jit = None
    numerov_scan_jit = None
    numerov_array_jit = None

    sturm_counts = sturm_counts_numpy
    numerov_scan = _numerov_scan_py
    numerov_array = _numerov_array_py

numerov_scan_numpy = _numerov_scan_py
numerov_array_numpy = _numerov_array_py
