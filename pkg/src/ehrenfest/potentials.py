"""Potential families for 1-D wavepacket dynamics.

Two families are supported: polynomials with arbitrary real coefficients
and a flat floor with a single upward step.  Polynomials expose exact
analytic derivatives of any order.  The step is discontinuous, so it
deliberately has *no* derivative operation: its force only enters the
dynamics through the dedicated closed-form smeared acceleration in
:mod:`ehrenfest.semiclassical`.

The module also provides the all-real Hermite-type kernel ``R_n(y)``
that turns Gaussian moments of polynomials into finite sums.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = ["PolynomialPotential", "StepPotential", "hermite_real"]


@lru_cache(maxsize=None)
def _derivative_coefficients(coefficients, order):
    # polyder of an over-differentiated polynomial returns (0.0,)
    if order == 0:
        return coefficients
    return tuple(npoly.polyder(coefficients, m=order))


@dataclass(frozen=True)
class PolynomialPotential:
    """V(x) = sum_n coefficients[n] * x**n.

    Parameters
    ----------
    coefficients : sequence of float
        Ordered coefficients, constant term first.  The degree is the
        index of the last stored entry; trailing zeros are allowed.

    Notes
    -----
    Values are evaluated by Horner recursion and derivatives by exact
    coefficient shifts, so both are exact for polynomials up to float
    rounding.  The degree is uncapped, but the Gaussian-smearing kernel
    grows roughly factorially with degree, so double precision is only
    trustworthy up to degree ~30.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if not coeffs:
            raise ValueError("need at least one polynomial coefficient")
        if not all(np.isfinite(a) for a in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def value(self, x):
        """Potential value at ``x`` (scalar or array)."""
        return npoly.polyval(x, self.coefficients)

    def derivative(self, x, order=1):
        """Exact ``order``-th derivative at ``x``; zero beyond the degree."""
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        coeffs = _derivative_coefficients(self.coefficients, order)
        return npoly.polyval(x, coeffs)


@dataclass(frozen=True)
class StepPotential:
    """Flat floor with an upward step of ``height`` just past ``wall``.

    V(x) = 0 for x <= wall and V(x) = height for x > wall; the boundary
    point belongs to the zero side.
    """

    height: float
    wall: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.height) and self.height > 0):
            raise ValueError("step height must be positive and finite")
        if not np.isfinite(self.wall):
            raise ValueError("wall position must be finite")

    def value(self, x):
        """Potential value at ``x`` (scalar or array)."""
        return np.where(np.asarray(x, dtype=float) > self.wall, self.height, 0.0)[()]


def hermite_real(n, y):
    """All-real Hermite-type kernel R_n(y).

    R_n is the Hermite polynomial continued to imaginary argument and
    rotated back to the real axis, which makes every coefficient
    positive.  It satisfies

        R_0 = 1,  R_1 = 2 y,  R_{n+1} = 2 y R_n + 2 n R_{n-1},

    so evaluation for y >= 0 is free of cancellation.  Accepts scalar or
    array ``y``; growth overflow is propagated, not trapped.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    y = np.asarray(y, dtype=float)
    r_prev = np.ones_like(y)
    if n == 0:
        return r_prev[()]
    r = 2.0 * y
    for k in range(1, n):
        r, r_prev = 2.0 * y * r + 2.0 * k * r_prev, r
    return r[()]
