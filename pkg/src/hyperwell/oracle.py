"""Independent numerical bound-state solvers for the radial equation.

Two deliberately different methods act as ground truth for the closed
forms: a finite-difference discretization diagonalized by Sturm-sequence
bisection, and Numerov shooting with node-count bisection. Both solve

    -(hbar^2/2m) u'' + [V(r) + hbar^2 l(l+1)/(2m r^2)] u = E u

with Dirichlet ends on a uniform grid, entirely in real arithmetic.
Comparison against analytic levels is reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, EvaluationOverflowError, SamplingError, StructureError
from .potential import PhysicalConstants, PotentialParams, eval_potential
from .special import hyperbolic_pair

_NODE_EPS = 1e-8
_MAX_BISECT = 200


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid on [r_min, r_max], boundary points included."""

    r_min: float
    r_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and math.isfinite(self.r_max)):
            raise DomainError("RadialGrid: endpoints must be finite")
        if not (0.0 < self.r_min < self.r_max):
            raise DomainError(
                f"RadialGrid: need 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if not isinstance(self.n_points, (int, np.integer)) or self.n_points < 16:
            raise DomainError(f"RadialGrid: n_points must be an integer >= 16, got {self.n_points!r}")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_points)


def default_grid(alpha: float, n_points: int = 2000) -> RadialGrid:
    """The standard solve window [1e-6, 40/alpha]; the tail term e^(-2 alpha r)
    is below 1e-34 at the far end, so the asymptote is fully reached."""
    if not (alpha > 0) or not math.isfinite(alpha):
        raise DomainError(f"default_grid: alpha must be positive and finite, got {alpha!r}")
    return RadialGrid(1e-6, 40.0 / alpha, n_points)


@dataclass
class NumericSpectrum:
    method: str  # 'FiniteDifference' or 'Numerov'
    levels: tuple  # of (k, energy, node_count)
    wavefunctions: tuple  # per-level full-grid samples, L2-normalized
    grid: RadialGrid
    r: np.ndarray
    unreliable: bool = False
    notes: tuple = ()

    def __post_init__(self):
        es = [e for _, e, _ in self.levels]
        if any(e2 <= e1 for e1, e2 in zip(es, es[1:])):
            raise StructureError(f"{self.method}: energies not strictly increasing: {es}")

    def energies(self) -> np.ndarray:
        return np.array([e for _, e, _ in self.levels], dtype=float)

    def node_counts(self):
        return [c for _, _, c in self.levels]


def _sample_callable(potential, r: np.ndarray) -> np.ndarray:
    """Evaluate a scalar-or-vectorized potential callable on the grid."""
    try:
        v = np.asarray(potential(r), dtype=float)
        if v.shape == r.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([float(potential(float(ri))) for ri in r], dtype=float)


def _effective_samples(potential, l, consts, r) -> np.ndarray:
    v = _sample_callable(potential, r)
    if l:
        v = v + consts.hbar**2 * l * (l + 1) / (2.0 * consts.mass * r * r)
    bad = ~np.isfinite(v)
    if np.any(bad):
        raise SamplingError(
            f"potential non-finite at r = {float(r[bad][0])}", r=float(r[bad][0]))
    return np.ascontiguousarray(v)


def _count_sign_changes(u: np.ndarray) -> int:
    """Interior sign changes, ignoring values below 1e-8 of the max amplitude."""
    umax = float(np.max(np.abs(u)))
    if umax == 0.0:
        return 0
    sig = u[np.abs(u) > _NODE_EPS * umax]
    if sig.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(np.sign(sig)) != 0))


def _check_states(n_states, grid):
    if not isinstance(n_states, (int, np.integer)) or n_states < 0:
        raise DomainError(f"n_states must be a non-negative integer, got {n_states!r}")
    if n_states and n_states >= grid.n_points / 4:
        raise DomainError(
            f"n_states = {n_states} too large for n_points = {grid.n_points} "
            "(need n_states < n_points/4)")


def fd_spectrum(potential, l, consts, grid, n_states) -> NumericSpectrum:
    """Lowest n_states levels by 3-point finite differences.

    The symmetric tridiagonal operator is diagonalized by bisection with
    Sturm-sequence eigenvalue counts; eigenvectors come from inverse
    iteration and are L2-normalized with the trapezoid rule.
    """
    _check_states(n_states, grid)
    r = grid.points()
    if n_states == 0:
        return NumericSpectrum("FiniteDifference", (), (), grid, r)
    r_int = r[1:-1]
    veff = _effective_samples(potential, l, consts, r_int)
    h = grid.h
    t = consts.hbar**2 / (2.0 * consts.mass * h * h)
    diag = np.ascontiguousarray(2.0 * t + veff)
    m = diag.shape[0]
    off = np.full(m - 1, -t)
    off2 = np.ascontiguousarray(off * off)
    pivmin = max(1e-300, 2.3e-308 * max(1.0, t * t))

    glo = float(np.min(diag) - 2.0 * t)
    ghi = float(np.max(diag) + 2.0 * t)
    lo = np.full(n_states, glo)
    hi = np.full(n_states, ghi)
    targets = np.arange(1, n_states + 1)
    for _ in range(_MAX_BISECT):
        mids = np.ascontiguousarray(0.5 * (lo + hi))
        counts = _kernels.sturm_counts(diag, off2, mids, pivmin)
        ge = counts >= targets
        hi = np.where(ge, mids, hi)
        lo = np.where(ge, lo, mids)
        if np.all(hi - lo <= 1e-11 * np.maximum(1.0, np.abs(lo) + np.abs(hi))):
            break
    else:
        raise ConvergenceError(
            f"fd_spectrum: bisection not converged after {_MAX_BISECT} iterations")
    energies = 0.5 * (lo + hi)

    levels = []
    wfs = []
    for k in range(n_states):
        v = _kernels.inverse_iteration_numpy(diag, off, float(energies[k]),
                                             iters=3, seed=20201 + 7919 * k)
        u = np.zeros(grid.n_points)
        u[1:-1] = v
        nrm = math.sqrt(float(np.trapezoid(u * u, r)))
        u /= nrm
        levels.append((k, float(energies[k]), _count_sign_changes(u[1:-1])))
        wfs.append(u)
    return NumericSpectrum("FiniteDifference", tuple(levels), tuple(wfs), grid, r)


def _numerov_count(f, h2, u0, u1):
    nodes, _, ok = _kernels.numerov_scan(f, h2, u0, u1)
    if not ok:
        raise EvaluationOverflowError(
            "numerov integration produced non-finite values despite rescaling")
    return nodes


def numerov_spectrum(potential, l, consts, grid, E_window, n_states) -> NumericSpectrum:
    """Levels inside E_window by outward Numerov shooting.

    The start is the discrete regular solution u ~ (r - r_min)^(l+1),
    so u = 0 exactly at the left boundary (identical to the Dirichlet
    condition the finite-difference oracle imposes, and immune to a
    singular potential sample at r_min). Each level is located by
    bisection on the count of thresholded sign changes of the sweep, to
    |dE| <= 1e-10 max(1, |E|). E_window may be None, in which case a
    window is grown automatically from the interior potential floor.
    Level indices are global (equal to the node count), so a window
    starting above the ground state yields k > 0 entries.
    """
    _check_states(n_states, grid)
    r = grid.points()
    if n_states == 0:
        return NumericSpectrum("Numerov", (), (), grid, r)
    veff = _effective_samples(potential, l, consts, r)
    h = grid.h
    h2 = h * h
    pref = 2.0 * consts.mass / consts.hbar**2
    u0 = 0.0
    u1 = h ** (l + 1)

    def count(E):
        f = np.ascontiguousarray(pref * (veff - E))
        return _numerov_count(f, h2, u0, u1)

    notes = []
    if E_window is None:
        # interior floor: boundary samples may be singular and only ever
        # multiply the u = 0 start value
        e_lo = float(np.min(veff[1:-1])) - 1.0
        k_lo = count(e_lo)
        e_hi = e_lo + 1.0
        for _ in range(_MAX_BISECT):
            if count(e_hi) >= k_lo + n_states:
                break
            e_hi = e_lo + 2.0 * (e_hi - e_lo)
        else:
            raise ConvergenceError("numerov_spectrum: automatic window failed to grow")
        notes.append(f"window auto-selected: [{e_lo:.6g}, {e_hi:.6g}]")
    else:
        e_lo, e_hi = float(E_window[0]), float(E_window[1])
        if not (e_lo < e_hi):
            raise DomainError(f"numerov_spectrum: empty window [{e_lo}, {e_hi}]")
        k_lo = count(e_lo)
    k_hi = count(e_hi)
    available = k_hi - k_lo
    if available <= 0:
        return NumericSpectrum(
            "Numerov", (), (), grid, r,
            notes=(f"searched window [{e_lo:.6g}, {e_hi:.6g}]: no levels found",))
    if available < n_states:
        notes.append(
            f"window [{e_lo:.6g}, {e_hi:.6g}] holds {available} of {n_states} requested levels")

    levels = []
    wfs = []
    lo_cur = e_lo
    for k in range(k_lo, k_lo + min(n_states, available)):
        lo_k, hi_k = lo_cur, e_hi
        for _ in range(_MAX_BISECT):
            mid = 0.5 * (lo_k + hi_k)
            if count(mid) >= k + 1:
                hi_k = mid
            else:
                lo_k = mid
            if hi_k - lo_k <= 1e-10 * max(1.0, abs(mid)):
                break
        else:
            raise ConvergenceError(
                f"numerov_spectrum: bisection for level {k} not converged "
                f"after {_MAX_BISECT} iterations")
        E = 0.5 * (lo_k + hi_k)
        f = np.ascontiguousarray(pref * (veff - E))
        u = np.empty(grid.n_points)
        if not _kernels.numerov_array(f, h2, u0, u1, u):
            raise EvaluationOverflowError(
                "numerov integration produced non-finite values despite rescaling")
        nrm = math.sqrt(float(np.trapezoid(u * u, r)))
        u /= nrm
        if u[int(np.argmax(np.abs(u)))] < 0.0:
            u = -u
        levels.append((k, E, _count_sign_changes(u[1:-1])))
        wfs.append(u)
        lo_cur = E
    return NumericSpectrum("Numerov", tuple(levels), tuple(wfs), grid, r,
                           notes=tuple(notes))


@dataclass(frozen=True)
class ComparisonReport:
    matching: str
    rows: tuple  # of (n, re_analytic, im_analytic, e_numeric, delta_abs, delta_rel)
    max_abs_delta: float
    max_rel_delta: float
    mean_abs_delta: float
    notes: tuple = ()


def compare_levels(analytic, numeric: NumericSpectrum, matching="ByIndex") -> ComparisonReport:
    """Per-index deltas between analytic levels and an oracle spectrum.

    Deltas are complex-modulus distances |E_analytic - E_numeric|; relative
    deltas are against |E_numeric| (floored at 1). This is a report; no
    agreement is asserted anywhere.
    """
    if matching != "ByIndex":
        raise DomainError(f"compare_levels: unknown matching {matching!r}")
    notes = []
    m = min(len(analytic), len(numeric.levels))
    if len(analytic) != len(numeric.levels):
        notes.append(
            f"length mismatch: {len(analytic)} analytic vs "
            f"{len(numeric.levels)} numeric levels; compared first {m}")
    rows = []
    for i in range(m):
        lvl = analytic[i]
        e_num = float(numeric.levels[i][1])
        d = abs(complex(lvl.energy) - e_num)
        rows.append((lvl.n, float(lvl.energy.real), float(lvl.energy.imag),
                     e_num, d, d / max(1.0, abs(e_num))))
    if rows:
        abs_d = [row[4] for row in rows]
        rel_d = [row[5] for row in rows]
        summary = (max(abs_d), max(rel_d), sum(abs_d) / len(abs_d))
    else:
        summary = (0.0, 0.0, 0.0)
    return ComparisonReport(matching, tuple(rows), summary[0], summary[1],
                            summary[2], tuple(notes))


@dataclass(frozen=True)
class StudyReport:
    alpha: float
    l: int
    levels: tuple  # of (k, E_exact, E_approx, shift_abs, shift_rel)
    unreliable: bool
    notes: tuple = ()

    def max_rel_shift(self) -> float:
        return max((row[4] for row in self.levels), default=0.0)


def fall_to_center_unreliable(params: PotentialParams, consts: PhysicalConstants, l) -> bool:
    """True when the origin's inverse-square coefficient is attractive past
    the critical -hbar^2/(8m), where ground-truth bound states cease to exist
    and grid results depend on r_min."""
    c_inv = (params.b * params.V1 - params.c * params.V2) / params.alpha**2 \
        + consts.hbar**2 * l * (l + 1) / (2.0 * consts.mass)
    return c_inv < -consts.hbar**2 / (8.0 * consts.mass)


def approximation_study(params: PotentialParams, consts, l, grid, n_states) -> StudyReport:
    """Per-level shift from replacing 1/r^2 by alpha^2 cosech^2(alpha r).

    Runs the finite-difference solver twice on the same grid, once with
    the exact centrifugal term and once with the hyperbolic surrogate, and
    reports the per-level relative energy differences. Meaningless at
    l = 0, where both terms vanish.
    """
    if not isinstance(l, (int, np.integer)) or l < 1:
        raise DomainError(f"approximation_study: requires l >= 1, got {l!r}")

    def bare(r):
        return eval_potential(params, r)

    cent = consts.hbar**2 * l * (l + 1) / (2.0 * consts.mass)

    def surrogate(r):
        _, csch2 = hyperbolic_pair(params.alpha * np.asarray(r, dtype=float))
        return eval_potential(params, r) + cent * params.alpha**2 * csch2

    exact = fd_spectrum(bare, l, consts, grid, n_states)
    approx = fd_spectrum(surrogate, 0, consts, grid, n_states)
    notes = []
    m = min(len(exact.levels), len(approx.levels))
    if m < n_states:
        notes.append(f"only {m} of {n_states} levels resolved")
    rows = []
    for i in range(m):
        e_ex = exact.levels[i][1]
        e_ap = approx.levels[i][1]
        d = abs(e_ex - e_ap)
        rows.append((i, e_ex, e_ap, d, d / max(1e-300, abs(e_ex))))
    return StudyReport(params.alpha, int(l), tuple(rows),
                       fall_to_center_unreliable(params, consts, l), tuple(notes))
