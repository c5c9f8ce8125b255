"""Scalar special functions used by both the analytic and numeric layers.

Everything here is branch-explicit: complex square roots and powers always
take the principal branch, and the hyperbolic pair switches to an
asymptotic form before ``sinh`` can overflow.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateParameterError, DomainError, SingularCoefficientError

# Above this argument coth is 1.0 to machine precision and 1/sinh^2 is
# replaced by its leading exponential to avoid overflow of sinh^2.
ASYMPTOTIC_SWITCH = 20.0


def hyperbolic_pair(z):
    """Return ``(coth(z), cosech^2(z))`` for ``z > 0``.

    Accepts a scalar or an ndarray. For ``z > 20`` the pair is evaluated
    asymptotically as ``(1, 4 exp(-2z))``; the direct formulas would lose
    nothing before ~700 but the switch keeps cosech^2 finite for any z.
    """
    scalar = np.isscalar(z) or getattr(z, "ndim", 0) == 0
    arr = np.asarray(z, dtype=float)
    if arr.size == 0:
        return (arr.copy(), arr.copy())
    if not np.all(np.isfinite(arr)):
        raise DomainError("hyperbolic_pair: argument must be finite")
    if np.any(arr <= 0.0):
        raise DomainError(f"hyperbolic_pair: argument must be positive, got {float(np.min(arr))}")
    safe = np.minimum(arr, ASYMPTOTIC_SWITCH)
    sh = np.sinh(safe)
    coth = np.cosh(safe) / sh
    csch2 = 1.0 / (sh * sh)
    big = arr > ASYMPTOTIC_SWITCH
    if np.any(big):
        coth = np.where(big, 1.0, coth)
        # exp underflows to 0 beyond z ~ 368, which is the correct limit
        csch2 = np.where(big, 4.0 * np.exp(-2.0 * arr), csch2)
    if scalar:
        return (float(coth), float(csch2))
    return (coth, csch2)


def principal_sqrt(z):
    """Principal square root: Re >= 0, negative reals map to +i sqrt|z|."""
    zc = complex(z)
    if not (cmath.isfinite(zc)):
        raise DomainError("principal_sqrt: argument must be finite")
    return cmath.sqrt(zc)


def solve_quadratic(c2, c1, c0):
    """Roots of ``c2 z^2 + c1 z + c0 = 0`` with complex coefficients.

    Returns ``(roots, residuals)``. For a genuine quadratic the roots are
    ordered (plus-root, minus-root) by the sign in front of the principal
    square root of the discriminant; ``c2 == 0`` degrades to the linear
    case with a single root. The larger-magnitude root comes from the full
    formula and its companion from ``c0 / (c2 * root)``, which avoids the
    classic cancellation when ``c1^2 >> |4 c2 c0|``.
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    for name, c in (("c2", c2), ("c1", c1), ("c0", c0)):
        if not cmath.isfinite(c):
            raise DomainError(f"solve_quadratic: coefficient {name} must be finite")
    if c2 == 0:
        if c1 == 0:
            raise SingularCoefficientError(
                "solve_quadratic: c2 = 0 and c1 = 0 leave no equation to solve")
        root = -c0 / c1
        return (root,), (abs(c1 * root + c0),)

    disc = c1 * c1 - 4.0 * c2 * c0
    sd = cmath.sqrt(disc)
    num_plus = -c1 + sd
    num_minus = -c1 - sd
    if abs(num_plus) >= abs(num_minus):
        root_plus = num_plus / (2.0 * c2)
        root_minus = c0 / (c2 * root_plus) if root_plus != 0 else num_minus / (2.0 * c2)
    else:
        root_minus = num_minus / (2.0 * c2)
        root_plus = c0 / (c2 * root_minus) if root_minus != 0 else num_plus / (2.0 * c2)
    roots = (root_plus, root_minus)
    residuals = tuple(abs(c2 * z * z + c1 * z + c0) for z in roots)
    return roots, residuals


@dataclass(frozen=True)
class JacobiSpec:
    """Degree, the two (possibly complex) parameters, and the argument."""

    n: int
    a: complex
    b: complex
    x: object  # complex scalar or ndarray

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise DomainError(f"JacobiSpec: degree must be a non-negative integer, got {self.n!r}")


def _binom(z, m):
    """Generalized binomial C(z, m) for integer m >= 0 via the product form."""
    out = 1.0 + 0.0j
    for j in range(m):
        out *= (z - j) / (m - j)
    return out


def _recurrence_guard(k, a, b):
    # leading coefficient of the three-term recurrence for degree k
    coef = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0)
    scale = (1.0 + abs(a) + abs(b) + k) ** 3
    if abs(coef) < 1e-10 * scale:
        raise DegenerateParameterError(
            f"jacobi: recurrence coefficient 2k(k+a+b)(2k+a+b-2) vanishes at k = {k}")
    return coef


def _jacobi_recurrence(n, a, b, x):
    """Three-term recurrence; x may be a complex scalar or ndarray."""
    p_prev = np.ones_like(np.asarray(x, dtype=complex)) if not np.isscalar(x) else 1.0 + 0.0j
    if n == 0:
        return p_prev
    p = ((a + b + 2.0) * x + (a - b)) / 2.0
    for k in range(2, n + 1):
        denom = _recurrence_guard(k, a, b)
        s = 2.0 * k + a + b
        m1 = (s - 1.0) * ((s * (s - 2.0)) * x + (a * a - b * b))
        m2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p, p_prev = (m1 * p - m2 * p_prev) / denom, p
    return p


def jacobi(spec: JacobiSpec):
    """Jacobi polynomial P_n^(a,b)(x) with complex parameters.

    Degrees 0 and 1 come from the closed forms; higher degrees run the
    standard three-term recurrence, which raises DegenerateParameterError
    if a leading coefficient vanishes for some intermediate degree.
    """
    for name, val in (("a", spec.a), ("b", spec.b)):
        if not cmath.isfinite(complex(val)):
            raise DomainError(f"jacobi: parameter {name} must be finite")
    if spec.n >= 2:
        for k in range(2, spec.n + 1):
            _recurrence_guard(k, complex(spec.a), complex(spec.b))
    return _jacobi_recurrence(spec.n, complex(spec.a), complex(spec.b), spec.x)


def jacobi_sum(spec: JacobiSpec):
    """P_n^(a,b)(x) by the explicit finite sum; the recurrence's test oracle.

    P_n = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
    """
    n, a, b = spec.n, complex(spec.a), complex(spec.b)
    x = spec.x if np.isscalar(spec.x) else np.asarray(spec.x, dtype=complex)
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    total = 0.0 + 0.0j if np.isscalar(x) else np.zeros_like(x)
    for s in range(n + 1):
        total = total + _binom(n + a, n - s) * _binom(n + b, s) * lo**s * hi ** (n - s)
    return total
