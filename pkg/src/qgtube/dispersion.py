"""Floquet modes of the wrapped tube.

For a coprime wrap ``(alpha, beta)`` with multiplicity ``delta`` and sector
``ell``, every solution of the tube and dispersion conditions is
``(z1, z2) = (z**beta, z**-alpha / eta)`` with ``eta = chi(-ell/(beta*delta))``
and ``z`` a root of

    z**beta + z**-beta + eta*z**alpha + z**-alpha/eta = 4 cos k.

Multiplying by ``z**beta`` gives a polynomial of degree ``2*beta`` whose roots
are found as companion-matrix eigenvalues.
"""
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .core import SIN_TOL, check_wavenumber, dispersion_lhs, null_coefficients
from .errors import ConsistencyError, DegenerateSectorError, ValidationError
from .geometry import primitive_cut
from .traces import mode_flux

DEGENERACY_TOL = 1e-12
CLUSTER_RADIUS = 1e-7
UNIT_TOL = 1e-8
FLUX_TOL = 1e-10
MULT_TOL = 1e-7
DISJOINT_TOL = 1e-6


class Direction(str, Enum):
    EVANESCENT_RESPONSE = "EvanescentResponse"
    EVANESCENT_SOURCE = "EvanescentSource"
    PROPAGATING_RESPONSE = "PropagatingResponse"
    PROPAGATING_SOURCE = "PropagatingSource"
    BAND_EDGE = "BandEdgeDegenerate"

    @property
    def is_response(self):
        return self in (Direction.EVANESCENT_RESPONSE, Direction.PROPAGATING_RESPONSE)

    @property
    def is_source(self):
        return self in (Direction.EVANESCENT_SOURCE, Direction.PROPAGATING_SOURCE)

    @property
    def is_propagating(self):
        return self in (Direction.PROPAGATING_RESPONSE, Direction.PROPAGATING_SOURCE)


def chi(t):
    return np.exp(2j * np.pi * t)


def sector_eta(spec, ell):
    return chi(-ell / (spec.beta * spec.delta))


@dataclass(frozen=True)
class FloquetMode:
    spec: object
    k: float
    ell: int
    z: complex
    z1: complex
    z2: complex
    eta: complex
    coeffs: object
    multiplicity: int = 1
    direction: Direction = None
    axis_decay: float = None
    flux: float = None

    def scaled(self, factor):
        """Same mode with edge amplitudes multiplied by ``factor``."""
        flux = None if self.flux is None else self.flux * abs(factor) ** 2
        return replace(self, coeffs=self.coeffs.scaled(factor), flux=flux)


@dataclass(frozen=True)
class ModeSet:
    spec: object
    k: float
    modes: tuple
    min_sector_distance: float = np.inf

    @property
    def sectors_disjoint(self):
        return self.min_sector_distance > DISJOINT_TOL

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def sector(self, ell):
        return [m for m in self.modes if m.ell == ell]

    def with_direction(self, *directions):
        return [m for m in self.modes if m.direction in directions]

    @property
    def band_edge(self):
        return any(m.direction is Direction.BAND_EDGE for m in self.modes)

    @property
    def n_propagating_channels(self):
        return sum(1 for m in self.modes if m.direction is Direction.PROPAGATING_RESPONSE)


def laurent_coefficients(spec, ell, k):
    """Ascending coefficients of ``z**beta`` times the sector's Laurent equation."""
    if not 0 <= ell < spec.delta:
        raise ValidationError(f"sector ell={ell} outside [0, {spec.delta})")
    a, b = spec.alpha, spec.beta
    eta = sector_eta(spec, ell)
    coeffs = np.zeros(2 * b + 1, complex)
    coeffs[2 * b] += 1
    coeffs[b + a] += eta
    coeffs[b] += -4 * np.cos(k)
    coeffs[b - a] += 1 / eta
    coeffs[0] += 1
    return coeffs


def _laurent(z, spec, eta, k):
    a, b = spec.alpha, spec.beta
    return z**b + z**-b + eta * z**a + z**-a / eta - 4 * np.cos(k)


def _laurent_dz(z, spec, eta):
    a, b = spec.alpha, spec.beta
    return (b * (z**b - z**-b) + a * (eta * z**a - z**-a / eta)) / z


def _cluster(roots, radius):
    """Group roots closer than ``radius`` (single linkage); returns list of index lists."""
    n = len(roots)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < radius:
                label[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(z, spec, eta, k, steps=3):
    for _ in range(steps):
        g = _laurent(z, spec, eta, k)
        dg = _laurent_dz(z, spec, eta)
        if dg == 0:
            break
        z_new = z - g / dg
        if abs(_laurent(z_new, spec, eta, k)) >= abs(g):
            break
        z = z_new
    return z


def sector_roots(spec, ell, k):
    """Roots ``z`` with multiplicities, clustered roots merged to their mean."""
    coeffs = laurent_coefficients(spec, ell, k)
    if abs(coeffs[-1]) <= DEGENERACY_TOL:
        raise DegenerateSectorError(ell)
    eta = sector_eta(spec, ell)
    roots = np.roots(coeffs[::-1])
    out = []
    for group in _cluster(roots, CLUSTER_RADIUS):
        if len(group) == 1:
            out.append((_polish(roots[group[0]], spec, eta, k), 1))
        else:
            zc = roots[group].mean()
            out.extend((zc, len(group)) for _ in group)
    return out


def solve_modes(spec, ell, k, cut=None):
    """All Floquet modes of sector ``ell``, one per root counted with multiplicity.

    Directions are filled in using ``cut`` (default: the primitive cut of the
    wrap).
    """
    k = check_wavenumber(k, SIN_TOL)
    eta = sector_eta(spec, ell)
    a, b = spec.alpha, spec.beta
    modes = []
    for z, mult in sector_roots(spec, ell, k):
        z1 = z**b
        z2 = z**-a / eta
        coeffs = null_coefficients(k, z1, z2)
        modes.append(FloquetMode(spec, k, ell, complex(z), complex(z1), complex(z2), eta, coeffs, mult))
    if cut is None:
        cut = primitive_cut(spec)
    modes = [classify(m, cut) for m in modes]
    modes.sort(key=lambda m: (round(abs(m.z), 12), round(float(np.angle(m.z)), 12)))
    return modes


def _pair_distance(m1, m2):
    return max(abs(m1.z1 - m2.z1), abs(m1.z2 - m2.z2))


def all_modes(spec, k, cut=None):
    """Union of all sectors, with the minimum cross-sector distance recorded."""
    if cut is None:
        cut = primitive_cut(spec)
    sectors = [solve_modes(spec, ell, k, cut) for ell in range(spec.delta)]
    dmin = np.inf
    for i in range(len(sectors)):
        for j in range(i + 1, len(sectors)):
            for m1 in sectors[i]:
                for m2 in sectors[j]:
                    dmin = min(dmin, _pair_distance(m1, m2))
    modes = tuple(m for sector in sectors for m in sector)
    return ModeSet(spec, float(k), modes, dmin)


def recover_z(z1, z2, spec, ell, tol=1e-8):
    """The unique ``z`` with ``z**beta = z1`` and ``z**-alpha / eta = z2``."""
    eta = sector_eta(spec, ell)
    a, b = spec.alpha, spec.beta
    base = z1 ** (1.0 / b) if z1 != 0 else 0
    if base == 0 or z2 == 0:
        raise ConsistencyError("multipliers must be nonzero")
    best, best_err = None, np.inf
    for j in range(b):
        cand = base * chi(j / b)
        err = abs(cand**-a / eta - z2) / max(1.0, abs(z2))
        if err < best_err:
            best, best_err = cand, err
    if best_err > tol:
        raise ConsistencyError(f"no beta-th root of z1 reproduces z2 (best mismatch {best_err:.3e})")
    return complex(best)


@dataclass(frozen=True)
class RootMultiplicity:
    derivative: complex
    simple: bool


def simple_root_check(mode, spec, k, tol=MULT_TOL):
    """Multiple-root test ``beta*(z^b - z^-b) + alpha*(eta z^a - z^-a/eta) = 0``.

    Raises :class:`ConsistencyError` if a root off the unit circle is reported
    multiple, which the theory rules out.
    """
    z, eta = mode.z, mode.eta
    a, b = spec.alpha, spec.beta
    d = b * (z**b - z**-b) + a * (eta * z**a - z**-a / eta)
    simple = abs(d) > tol
    if not simple and abs(abs(z) - 1) > 1e-6:
        raise ConsistencyError(f"multiple root off the unit circle at z={z!r}")
    return RootMultiplicity(complex(d), simple)


def axis_exponents(spec):
    """``(p, q)`` with ``beta*p - alpha*q = 1`` and the smallest positive ``p``."""
    a, b = spec.alpha, spec.beta
    for p in range(1, a + 1):
        if (b * p - 1) % a == 0:
            return p, (b * p - 1) // a
    raise ConsistencyError("alpha and beta are not coprime")


def axis_multiplier(mode, spec=None):
    """Field multiplier for one step deeper into the tube (sigma -> sigma + 1)."""
    p, q = axis_exponents(spec or mode.spec)
    return mode.z1**p * mode.z2**q


def classify_mode(mode, spec, cut, unit_tol=UNIT_TOL, flux_tol=FLUX_TOL, flux=None):
    tau = abs(axis_multiplier(mode, spec))
    if tau < 1 - unit_tol:
        return Direction.EVANESCENT_RESPONSE
    if tau > 1 + unit_tol:
        return Direction.EVANESCENT_SOURCE
    if flux is None:
        flux = mode_flux(mode, cut)
    if mode.multiplicity > 1 or abs(flux) <= flux_tol:
        return Direction.BAND_EDGE
    return Direction.PROPAGATING_RESPONSE if flux > 0 else Direction.PROPAGATING_SOURCE


def classify(mode, cut):
    """Return ``mode`` with direction, ``|tau|`` and flux filled in."""
    flux = mode_flux(mode, cut)
    return replace(
        mode,
        direction=classify_mode(mode, mode.spec, cut, flux=flux),
        axis_decay=float(abs(axis_multiplier(mode))),
        flux=flux,
    )


def partner_index(mode, candidates, tol=1e-6):
    """Index of the mode in ``candidates`` with multipliers ``(1/z1, 1/z2)``."""
    best, dist = None, np.inf
    for i, other in enumerate(candidates):
        d = max(abs(other.z1 - 1 / mode.z1), abs(other.z2 - 1 / mode.z2))
        d /= max(1.0, abs(1 / mode.z1), abs(1 / mode.z2))
        if d < dist:
            best, dist = i, d
    if dist > tol:
        raise ConsistencyError(f"no inverse partner found for z={mode.z!r} (distance {dist:.3e})")
    return best


__all__ = [
    "Direction",
    "FloquetMode",
    "ModeSet",
    "chi",
    "sector_eta",
    "laurent_coefficients",
    "sector_roots",
    "solve_modes",
    "all_modes",
    "recover_z",
    "simple_root_check",
    "axis_exponents",
    "axis_multiplier",
    "classify_mode",
    "classify",
    "partner_index",
    "dispersion_lhs",
]
