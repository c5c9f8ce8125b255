"""The generalized inverted hyperbolic potential family and its special cases.

The family is

    V(r) = -a V0 coth(alpha r) + b V1 coth^2(alpha r)
           - c V2 cosech^2(alpha r) + d

with depths V0, V1, V2 and screening rate alpha > 0. Named special cases
zero out (or flip) coefficients; the general shape tends to the constant
-a V0 + b V1 + d as r -> infinity and is singular at the origin whenever
a, b or c is active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, EvaluationOverflowError
from .special import hyperbolic_pair


@dataclass(frozen=True)
class PotentialParams:
    """Shape coefficients a, b, c, d plus depths V0, V1, V2 and rate alpha."""

    a: float
    b: float
    c: float
    d: float
    V0: float
    V1: float
    V2: float
    alpha: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "V0", "V1", "V2", "alpha"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val)):
                raise DomainError(f"PotentialParams: {name} must be a finite real, got {val!r}")
        if self.alpha <= 0:
            raise DomainError(f"PotentialParams: alpha must be positive, got {self.alpha}")

    @property
    def asymptote(self):
        """Limit of V(r) as r -> infinity."""
        return -self.a * self.V0 + self.b * self.V1 + self.d


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 0.5  # natural units: hbar = 2m = 1

    def __post_init__(self):
        for name in ("hbar", "mass"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise DomainError(f"PhysicalConstants: {name} must be positive and finite")


@dataclass(frozen=True)
class QuantumState:
    n: int
    l: int

    def __post_init__(self):
        for name in ("n", "l"):
            val = getattr(self, name)
            if not isinstance(val, (int, np.integer)) or val < 0:
                raise DomainError(f"QuantumState: {name} must be a non-negative integer")


def _eval_from_pair(params, coth, csch2):
    """Assemble the four terms from precomputed coth and cosech^2 values.

    Terms with a zero coefficient are skipped so that, say, a pure-constant
    potential stays exact even where cosech^2 would overflow.
    """
    out = np.zeros_like(np.asarray(coth, dtype=float)) + params.d
    if params.a * params.V0 != 0.0:
        out = out - params.a * params.V0 * coth
    if params.b * params.V1 != 0.0:
        out = out + params.b * params.V1 * coth * coth
    if params.c * params.V2 != 0.0:
        out = out - params.c * params.V2 * csch2
    return out


_TERM_NAMES = (
    ("a", "V0", "a*V0*coth"),
    ("b", "V1", "b*V1*coth^2"),
    ("c", "V2", "c*V2*cosech^2"),
)


def _name_offender(params, coth, csch2):
    # identify which active term went non-finite, for the error message
    pieces = {
        "a*V0*coth": params.a * params.V0 * np.asarray(coth),
        "b*V1*coth^2": params.b * params.V1 * np.asarray(coth) ** 2,
        "c*V2*cosech^2": params.c * params.V2 * np.asarray(csch2),
    }
    for coeff, depth, label in _TERM_NAMES:
        if getattr(params, coeff) * getattr(params, depth) != 0.0:
            if not np.all(np.isfinite(pieces[label])):
                return label
    return "potential"


def eval_potential(params: PotentialParams, r):
    """V(r) for scalar or array r > 0.

    Raises DomainError for r outside (0, inf) and EvaluationOverflowError,
    naming the term, if an active term evaluates non-finite.
    """
    scalar = np.isscalar(r) or getattr(r, "ndim", 0) == 0
    arr = np.asarray(r, dtype=float)
    if arr.size == 0:
        return arr.copy()
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("eval_potential: r must lie in (0, inf)")
    with np.errstate(over="ignore", invalid="ignore"):
        coth, csch2 = hyperbolic_pair(params.alpha * arr)
        out = _eval_from_pair(params, coth, csch2)
    if not np.all(np.isfinite(out)):
        term = _name_offender(params, coth, csch2)
        flat_out = np.atleast_1d(np.asarray(out, dtype=float))
        flat_r = np.atleast_1d(arr)
        bad_r = float(flat_r[~np.isfinite(flat_out)][0])
        raise EvaluationOverflowError(
            f"eval_potential: term {term} is non-finite at r = {bad_r}")
    return float(out) if scalar else out


def centrifugal_approx(alpha: float, r):
    """The short-range replacement for 1/r^2 and its pointwise quality.

    Returns ``(approx, exact, rel_error)`` where approx = alpha^2
    cosech^2(alpha r), exact = 1/r^2 and rel_error = |approx - exact| r^2
    = 1 - (alpha r)^2 cosech^2(alpha r). A series branch below
    alpha r = 1e-3 avoids the cancellation in the direct difference; the
    leading behaviour is (alpha r)^2 / 3.
    """
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"centrifugal_approx: alpha must be positive, got {alpha!r}")
    scalar = np.isscalar(r) or getattr(r, "ndim", 0) == 0
    arr = np.asarray(r, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0)):
        raise DomainError("centrifugal_approx: r must lie in (0, inf)")
    x = alpha * arr
    _, csch2 = hyperbolic_pair(x)
    approx = alpha**2 * csch2
    exact = 1.0 / (arr * arr)
    x2 = x * x
    series = x2 / 3.0 - x2 * x2 / 15.0 + 2.0 * x2 * x2 * x2 / 189.0
    direct = np.abs(1.0 - x2 * csch2)
    rel = np.where(x < 1e-3, series, direct)
    if scalar:
        return float(approx), float(exact), float(rel)
    return approx, exact, rel


def effective_potential(params, consts, l, r, approximate=False):
    """V(r) plus the centrifugal barrier hbar^2 l(l+1)/(2m r^2).

    With approximate=True the barrier uses alpha^2 cosech^2(alpha r) in
    place of 1/r^2, which is the substitution that makes the closed-form
    spectrum possible for l > 0.
    """
    if not isinstance(l, (int, np.integer)) or l < 0:
        raise DomainError(f"effective_potential: l must be a non-negative integer, got {l!r}")
    base = eval_potential(params, r)
    if l == 0:
        return base
    coef = consts.hbar**2 * l * (l + 1) / (2.0 * consts.mass)
    arr = np.asarray(r, dtype=float)
    if approximate:
        _, csch2 = hyperbolic_pair(params.alpha * arr)
        barrier = coef * params.alpha**2 * csch2
    else:
        barrier = coef / (arr * arr)
    out = base + barrier
    return float(out) if np.isscalar(r) or getattr(r, "ndim", 0) == 0 else out


def scan_series(params, r_values, consts=None, l=0, approximate=False):
    """Evaluate V (or the effective potential) on a sequence of r values.

    Returns a list aligned with r_values in which every entry is a float
    or None; None is an explicit gap marker for points where a term
    overflowed or r was outside the domain. Gaps are never dropped.
    """
    out = []
    for r in r_values:
        try:
            if l:
                out.append(float(effective_potential(params, consts, l, float(r),
                                                     approximate=approximate)))
            else:
                out.append(float(eval_potential(params, float(r))))
        except (DomainError, EvaluationOverflowError):
            out.append(None)
    return out


def rosen_morse_params(a, c, V0, V2, alpha):
    """Rosen-Morse shape: b = d = 0.

    The coefficient a is stored exactly as given. The printed special-case
    formula for this shape corresponds to negating it (the sweep plots use
    a = -1 to flip the coth term's sign), so both sign conventions are
    reachable here; none is imposed.
    """
    return PotentialParams(a=a, b=0.0, c=c, d=0.0, V0=V0, V1=0.0, V2=V2, alpha=alpha)


def poschl_teller_params(c, V2, alpha):
    """Poschl-Teller shape: a = b = d = 0 and c stored negated.

    The family's cosech^2 term enters with a minus sign; this shape is
    defined with the opposite sign, so the incoming c is negated to store
    coefficients that reproduce +c V2 cosech^2 through the family formula.
    """
    return PotentialParams(a=0.0, b=0.0, c=-c, d=0.0, V0=0.0, V1=0.0, V2=V2, alpha=alpha)


def scarf_params(b, V1, alpha):
    """Scarf shape: a = c = d = 0. Even in coth, via the b-only term."""
    return PotentialParams(a=0.0, b=b, c=0.0, d=0.0, V0=0.0, V1=V1, V2=0.0, alpha=alpha)


SPECIAL_CASES = {
    "general": None,
    "rosen-morse": rosen_morse_params,
    "poschl-teller": poschl_teller_params,
    "scarf": scarf_params,
}


def special_case_params(kind, **kwargs):
    """Build PotentialParams for a named shape; see SPECIAL_CASES for names."""
    if kind not in SPECIAL_CASES:
        raise DomainError(
            f"unknown potential kind {kind!r}; available: {', '.join(sorted(SPECIAL_CASES))}")
    if kind == "general":
        return PotentialParams(**kwargs)
    return SPECIAL_CASES[kind](**kwargs)


def with_alpha(params: PotentialParams, alpha: float) -> PotentialParams:
    """Copy of params with a different screening rate."""
    return replace(params, alpha=alpha)
