"""Fundamental-domain algebra of the square-lattice quantum graph.

The fundamental domain is one vertex with two edges: a horizontal edge
running right from the vertex and a vertical edge running down from it, both
parametrized by ``x`` in ``[0, 1]`` with ``x = 0`` at the vertex.  The field on
cell ``(m, n)`` is the fundamental field multiplied by ``z1**m * z2**n``, where
``z1`` is the rightward and ``z2`` the upward Floquet multiplier.
"""
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import ConsistencyError, DomainError, ValidationError

SIN_TOL = 1e-8
DISPERSION_TOL = 1e-8


@dataclass(frozen=True)
class WrappingSpec:
    """Wrap data of the tube: coprime ``alpha <= beta`` and multiplicity ``delta``."""

    alpha: int
    beta: int
    delta: int = 1
    swapped: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "delta"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if gcd(self.alpha, self.beta) != 1:
            raise ValidationError(f"alpha={self.alpha} and beta={self.beta} must be coprime")
        if self.beta < self.alpha:
            raise ValidationError("expected beta >= alpha; use make_wrapping to reorder")

    @property
    def n_boundary(self):
        return self.alpha + self.beta


def make_wrapping(alpha_raw, beta_raw):
    """Reduce a raw wrap vector to :class:`WrappingSpec`.

    The common divisor becomes ``delta``; the axes are exchanged when needed so
    that ``beta >= alpha`` (the square lattice is symmetric under the swap).

    >>> make_wrapping(6, 4)
    WrappingSpec(alpha=2, beta=3, delta=2, swapped=True)
    """
    for name, value in (("alpha", alpha_raw), ("beta", beta_raw)):
        if isinstance(value, bool) or int(value) != value or value < 1:
            raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    alpha_raw, beta_raw = int(alpha_raw), int(beta_raw)
    delta = gcd(alpha_raw, beta_raw)
    a, b = alpha_raw // delta, beta_raw // delta
    if a > b:
        return WrappingSpec(b, a, delta, swapped=True)
    return WrappingSpec(a, b, delta)


def check_wavenumber(k, sin_tol=SIN_TOL):
    """Return ``k`` as a float, rejecting values where ``sin k`` degenerates."""
    k = float(k)
    if not np.isfinite(k):
        raise DomainError(f"wavenumber must be finite, got {k!r}")
    if abs(np.sin(k)) <= sin_tol:
        raise DomainError(f"|sin k| <= {sin_tol:g} at k={k!r}; the k = l*pi sectors are excluded")
    return k


def dispersion_lhs(z1, z2):
    """``z1 + 1/z1 + z2 + 1/z2``."""
    if z1 == 0 or z2 == 0:
        raise DomainError("Floquet multipliers must be nonzero")
    return z1 + 1 / z1 + z2 + 1 / z2


def dispersion_residual(k, z1, z2):
    return abs(dispersion_lhs(z1, z2) - 4 * np.cos(k))


def fundamental_matrix(k, z1, z2):
    """Vertex-condition matrix acting on ``(a1, b1, a2, b2)``.

    Rows are continuity at the vertex, matching at the right and lower
    neighbours, and the flux row.  The third row uses ``1/z2`` in both
    entries; with that entry the null vector of :func:`null_coefficients`
    annihilates the matrix whenever the dispersion relation holds.  The flux
    row keeps only the ``a``-columns; on the dispersion surface its ``b`` part
    vanishes on the null vector as well, so the null space is unchanged.
    """
    k = check_wavenumber(k)
    if z1 == 0 or z2 == 0:
        raise DomainError("Floquet multipliers must be nonzero")
    e, ei = np.exp(1j * k), np.exp(-1j * k)
    return np.array(
        [
            [1, 1, -1, -1],
            [z1 - e, z1 - ei, 0, 0],
            [0, 0, 1 / z2 - e, 1 / z2 - ei],
            [1 - e / z1, 0, 1 - e * z2, 0],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class EdgeWave:
    """``a*exp(ikx) + b*exp(-ikx)`` on an edge parametrized by ``x`` in [0, 1]."""

    a: complex
    b: complex
    k: float

    def value(self, x):
        return eval_edge_wave(self, x)

    def deriv(self, x):
        return eval_edge_wave_deriv(self, x)

    def __add__(self, other):
        if other.k != self.k:
            raise ConsistencyError("cannot add edge waves with different k")
        return EdgeWave(self.a + other.a, self.b + other.b, self.k)

    def __mul__(self, factor):
        return EdgeWave(self.a * factor, self.b * factor, self.k)

    __rmul__ = __mul__


def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise DomainError("edge coordinate must lie in [0, 1]")
    return x


def eval_edge_wave(w, x):
    x = _check_unit_interval(x)
    return w.a * np.exp(1j * w.k * x) + w.b * np.exp(-1j * w.k * x)


def eval_edge_wave_deriv(w, x):
    x = _check_unit_interval(x)
    return 1j * w.k * (w.a * np.exp(1j * w.k * x) - w.b * np.exp(-1j * w.k * x))


@dataclass(frozen=True)
class FundamentalCoefficients:
    """Edge amplitudes of the fundamental domain, ``c`` the overall scale."""

    a1: complex
    b1: complex
    a2: complex
    b2: complex
    c: complex = 1.0

    def as_array(self):
        return np.array([self.a1, self.b1, self.a2, self.b2], dtype=complex)

    def horizontal(self, k):
        return EdgeWave(self.a1, self.b1, k)

    def vertical(self, k):
        return EdgeWave(self.a2, self.b2, k)

    def scaled(self, factor):
        return FundamentalCoefficients(
            self.a1 * factor, self.b1 * factor, self.a2 * factor, self.b2 * factor, self.c * factor
        )


def null_coefficients(k, z1, z2, c=1.0, tol=DISPERSION_TOL):
    """Null vector of :func:`fundamental_matrix` on the dispersion surface.

    ``c * (z1 - 1/zeta, zeta - z1, 1/z2 - 1/zeta, zeta - 1/z2)`` with
    ``zeta = exp(ik)``.
    """
    k = check_wavenumber(k)
    res = dispersion_residual(k, z1, z2)
    scale = 1 + abs(z1) + abs(1 / z1) + abs(z2) + abs(1 / z2)
    if res > tol * scale:
        raise ConsistencyError(f"dispersion residual {res:.3e} exceeds tolerance at k={k!r}")
    zeta = np.exp(1j * k)
    return FundamentalCoefficients(
        c * (z1 - 1 / zeta), c * (zeta - z1), c * (1 / z2 - 1 / zeta), c * (zeta - 1 / z2), c
    )
