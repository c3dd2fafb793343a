"""Search for trapped states: zeros of the boundary system as parameters vary.

The detector is the smallest singular value of the assembled system, which
does not depend on the overall scale of the mode normalization the way the
determinant does.  Local minima of ``sigma_min(k)`` on a grid are bracketed,
narrowed by golden-section steps to the requested width, polished inside the
final bracket and then certified.
"""
import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .boundary import admissibility_residual, unitary_from_hermitian
from .core import SIN_TOL
from .dispersion import all_modes
from .errors import BandEdgeError, QGTubeError
from .scattering import assemble_system, total_trace
from .traces import AuxMode, retained_patch, vertex_residuals

PI_EXCLUSION = 1e-3
CERT_TOL = 1e-8
NEAR_SINGULAR = 1e-3
GOLDEN = (np.sqrt(5) - 1) / 2


def excluded(k):
    return abs(k - np.pi * np.round(k / np.pi)) < PI_EXCLUSION or abs(np.sin(k)) <= SIN_TOL


def system_or_none(spec, cut, bc, k, normalize=True):
    """Assembled system at ``k``, or ``None`` at excluded / band-edge points."""
    if excluded(k):
        return None
    modes = all_modes(spec, k, cut)
    if modes.band_edge:
        return None
    try:
        return assemble_system(modes, cut, bc, normalize)
    except BandEdgeError:
        return None


def sigma_min(system):
    return float(np.linalg.svd(system.M, compute_uv=False)[-1])


@dataclass(frozen=True)
class DetSample:
    k: float
    abs_det: float
    log10_abs_det: float
    condition: float
    sigma_min: float
    n_propagating: int
    band_edge: bool


def det_profile(spec, cut, bc, k_grid, normalize=True):
    """``|det M|``, ``log10|det M|``, condition number and ``sigma_min`` per grid point.

    Band-edge and excluded points are kept (in grid order) with NaN values and
    ``band_edge=True``.
    """
    out = []
    for k in k_grid:
        k = float(k)
        system = system_or_none(spec, cut, bc, k, normalize)
        if system is None:
            n_prop = 0 if excluded(k) else all_modes(spec, k, cut).n_propagating_channels
            out.append(DetSample(k, np.nan, np.nan, np.nan, np.nan, n_prop, True))
            continue
        sign, logdet = np.linalg.slogdet(system.M)
        out.append(
            DetSample(
                k,
                float(np.exp(logdet)),
                float(logdet / np.log(10)),
                system.condition,
                sigma_min(system),
                len(system.basis.propagating),
                False,
            )
        )
    return out


@dataclass(frozen=True)
class BoundStateCertificate:
    k: float
    sigma_min: float
    R: np.ndarray
    C: np.ndarray
    admissibility_residual: float
    interior_residual: float
    propagating_amplitude: float
    max_abs_tau: float
    n_propagating: int

    @property
    def certified(self):
        return (
            self.admissibility_residual < CERT_TOL
            and self.interior_residual < CERT_TOL
            and self.propagating_amplitude < CERT_TOL
        )

    @property
    def embedded(self):
        return self.n_propagating > 0

    def to_dict(self):
        return {
            "k": self.k,
            "sigma_min": self.sigma_min,
            "R": {"re": self.R.real.tolist(), "im": self.R.imag.tolist()},
            "C": {"re": self.C.real.tolist(), "im": self.C.imag.tolist()},
            "admissibility_residual": self.admissibility_residual,
            "interior_residual": self.interior_residual,
            "propagating_amplitude": self.propagating_amplitude,
            "max_abs_tau": self.max_abs_tau,
            "n_propagating": self.n_propagating,
            "embedded": self.embedded,
            "certified": self.certified,
        }


def certify(spec, cut, bc, k, patch_size=10, system=None):
    """Build the certificate for the null vector of the system at ``k``."""
    system = system or system_or_none(spec, cut, bc, k)
    if system is None:
        raise BandEdgeError(f"cannot certify at excluded or band-edge k={k!r}")
    _, s, vh = np.linalg.svd(system.M)
    v = vh[-1].conj()
    basis = system.basis
    beta = len(basis.responses)
    R, C = v[:beta], v[beta:]
    trace = total_trace(system, R, C, np.zeros(beta))
    terms = list(zip(basis.responses, R))
    aux = [AuxMode(a.anchor, c, k) for a, c in zip(basis.aux, C)]
    interior = vertex_residuals(cut, terms, aux, retained_patch(cut, patch_size), k=k)
    prop = basis.propagating
    prop_amp = float(np.abs(R[prop]).max(initial=0.0))
    live = [abs(basis.responses[i].axis_decay) for i in range(beta) if abs(R[i]) > CERT_TOL]
    return BoundStateCertificate(
        k=float(k),
        sigma_min=float(s[-1]),
        R=R,
        C=C,
        admissibility_residual=admissibility_residual(trace, bc),
        interior_residual=interior.worst,
        propagating_amplitude=prop_amp,
        max_abs_tau=float(max(live, default=0.0)),
        n_propagating=len(prop),
    )


def _golden_section(f, lo, hi, width, max_iter=400):
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo < width:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    return (c, fc, lo, hi) if fc <= fd else (d, fd, lo, hi)


@dataclass
class BoundStateSearch:
    certified: list = field(default_factory=list)
    near_singular: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.certified)

    def __len__(self):
        return len(self.certified)


def _sigma_fn(spec, cut, bc):
    def f(k):
        system = system_or_none(spec, cut, bc, k)
        return np.inf if system is None else sigma_min(system)

    return f


def find_bound_states(spec, cut, bc, interval, tol=1e-8, n_grid=200, near_threshold=NEAR_SINGULAR):
    """Bracket local minima of ``sigma_min(k)`` on ``interval`` and certify them.

    Each grid minimum is narrowed to a bracket of width ``tol``; the best point
    is then polished to machine precision inside that bracket before
    certification.  Candidates failing certification but with
    ``sigma_min < near_threshold`` are returned in ``near_singular``.
    """
    lo, hi = map(float, interval)
    grid = np.linspace(lo, hi, n_grid)
    f = _sigma_fn(spec, cut, bc)
    values = np.array([f(k) for k in grid])
    result = BoundStateSearch()
    for i in range(1, n_grid - 1):
        v = values[i]
        if not np.isfinite(v) or not (v <= values[i - 1] and v <= values[i + 1]):
            continue
        if values[i - 1] == v and i > 1 and values[i - 2] == v:
            continue
        _, _, blo, bhi = _golden_section(f, grid[i - 1], grid[i + 1], tol)
        k_star, s_star, _, _ = _golden_section(f, blo, bhi, 4 * np.finfo(float).eps * max(1.0, abs(bhi)))
        if not np.isfinite(s_star):
            continue
        try:
            cert = certify(spec, cut, bc, k_star)
        except QGTubeError:
            continue
        bucket = result.certified if cert.certified else result.near_singular
        if not cert.certified and cert.sigma_min >= near_threshold:
            continue
        if any(abs(c.k - cert.k) < max(10 * tol, 1e-12) for c in bucket):
            continue
        bucket.append(cert)
    result.certified.sort(key=lambda c: c.k)
    result.near_singular.sort(key=lambda c: c.k)
    return result


@dataclass(frozen=True)
class FamilySurface:
    s: np.ndarray
    k: np.ndarray
    sigma: np.ndarray
    certificates: list
    near_singular: list

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "k", "sigma_min"])
        for i, s in enumerate(self.s):
            for j, k in enumerate(self.k):
                w.writerow([repr(float(s)), repr(float(k)), _fmt(self.sigma[i, j])])
        return buf.getvalue()


def scan_bc_family(spec, cut, H_base, H_dir, s_grid, k_grid, threshold=NEAR_SINGULAR, tol=1e-8):
    """``sigma_min`` over ``U(s) = cayley(H_base + s*H_dir)`` and ``k``.

    For every ``s`` whose row minimum drops below ``threshold`` the bracket
    around that minimum is handed to :func:`find_bound_states`.
    """
    s_grid = np.asarray(s_grid, float)
    k_grid = np.asarray(k_grid, float)
    H_base = np.asarray(H_base, complex)
    H_dir = np.asarray(H_dir, complex)
    sigma = np.full((len(s_grid), len(k_grid)), np.nan)
    certs, near = [], []
    for i, s in enumerate(s_grid):
        bc = unitary_from_hermitian(H_base + s * H_dir, f"family s={s!r}")
        f = _sigma_fn(spec, cut, bc)
        row = np.array([f(k) for k in k_grid])
        row[~np.isfinite(row)] = np.nan
        sigma[i] = row
        if np.all(np.isnan(row)):
            continue
        j = int(np.nanargmin(row))
        if row[j] < threshold and 0 < j < len(k_grid) - 1:
            found = find_bound_states(spec, cut, bc, (k_grid[j - 1], k_grid[j + 1]), tol, n_grid=7)
            for c in found.certified:
                certs.append((float(s), c))
            for c in found.near_singular:
                near.append((float(s), c))
    return FamilySurface(s_grid, k_grid, sigma, certs, near)


def _fmt(x):
    return "" if not np.isfinite(x) else repr(float(x))


PROFILE_COLUMNS = ["k", "sigma_min", "abs_det_log10", "n_propagating", "band_edge_flag"]


def profile_csv(samples):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_COLUMNS)
    for s in samples:
        w.writerow([repr(s.k), _fmt(s.sigma_min), _fmt(s.log10_abs_det), s.n_propagating, int(s.band_edge)])
    return buf.getvalue()
