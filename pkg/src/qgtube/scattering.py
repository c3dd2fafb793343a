"""Half-infinite scattering problem at the cut.

Unknowns are the ``beta`` response amplitudes ``R`` and the ``alpha``
auxiliary amplitudes ``C``; given source amplitudes ``J`` the total trace must
satisfy ``(U - I) F + i (U + I) F' = 0``, i.e. ``U(F + iF') = F - iF'``.

Response modes are the decaying ones (``|tau| < 1``) plus the propagating
modes carrying flux away from the cut.  Source ``n`` is the inverse partner
``(1/z1, 1/z2)`` of response ``n``.
"""
from dataclasses import dataclass

import numpy as np

from .boundary import admissibility_residual, boundary_operator, check_compatible
from .core import check_wavenumber
from .dispersion import Direction, all_modes, partner_index
from .errors import BandEdgeError, ConsistencyError, SingularSystemError, StopBandError
from .geometry import build_cut
from .traces import AuxMode, BoundaryTrace, aux_trace, mode_trace, trace_flux

SINGULAR_COND = 1e12


def normalize_mode(mode, cut):
    """Unit ``|flux|`` for propagating modes, unit sup-norm of the trace otherwise."""
    if mode.direction.is_propagating:
        return mode.scaled(1 / np.sqrt(abs(mode.flux)))
    return mode.scaled(1 / mode_trace(mode, cut).sup_norm())


@dataclass(frozen=True)
class ScatterBasis:
    k: float
    responses: tuple
    sources: tuple
    aux: tuple

    @property
    def propagating(self):
        """Indices of the propagating channels (shared by responses and sources)."""
        return [i for i, m in enumerate(self.responses) if m.direction.is_propagating]


def scatter_basis(modes, cut, normalize=True):
    """Split a :class:`ModeSet` into paired response and source lists."""
    spec = modes.spec
    if spec.delta != 1:
        raise ConsistencyError("scattering requires delta = 1")
    if modes.band_edge:
        raise BandEdgeError(
            f"band-edge (double unit-circle) modes at k={modes.k!r}; perturb k slightly"
        )
    responses = [m for m in modes if m.direction.is_response]
    sources = [m for m in modes if m.direction.is_source]
    if len(responses) != spec.beta or len(sources) != spec.beta:
        raise ConsistencyError(
            f"expected {spec.beta} responses and sources, got {len(responses)} and {len(sources)}"
        )
    responses.sort(key=lambda m: (not m.direction.is_propagating, round(float(np.angle(m.z)), 12), abs(m.z)))
    paired = []
    remaining = list(sources)
    for r in responses:
        paired.append(remaining.pop(partner_index(r, remaining)))
    if normalize:
        responses = [normalize_mode(m, cut) for m in responses]
        paired = [normalize_mode(m, cut) for m in paired]
    aux = tuple(AuxMode(i, 1.0, modes.k) for i in range(len(cut.anchors)))
    return ScatterBasis(modes.k, tuple(responses), tuple(paired), aux)


@dataclass(frozen=True)
class ScatterSystem:
    M: np.ndarray
    source_columns: np.ndarray
    basis: ScatterBasis
    response_traces: tuple
    source_traces: tuple
    aux_traces: tuple
    bc: object

    @property
    def condition(self):
        return float(np.linalg.cond(self.M))

    def unknown_traces(self):
        return list(self.response_traces) + list(self.aux_traces)


def _traces(basis, cut):
    resp = tuple(mode_trace(m, cut) for m in basis.responses)
    src = tuple(mode_trace(m, cut) for m in basis.sources)
    aux = tuple(aux_trace(a, cut) for a in basis.aux)
    return resp, src, aux


def assemble_system(modes, cut, bc, normalize=True):
    """``M = (U-I)[F_resp, X] + i(U+I)[F'_resp, X']`` and the source columns
    ``(I-U)F_src - i(U+I)F'_src``."""
    check_compatible(bc, cut)
    basis = scatter_basis(modes, cut, normalize)
    resp, src, aux = _traces(basis, cut)
    cols = list(resp) + list(aux)
    F = np.column_stack([t.F for t in cols])
    Fp = np.column_stack([t.Fp for t in cols])
    eye = np.eye(bc.size)
    U = bc.U
    M = (U - eye) @ F + 1j * (U + eye) @ Fp
    Fs = np.column_stack([t.F for t in src])
    Fps = np.column_stack([t.Fp for t in src])
    S = (eye - U) @ Fs - 1j * (U + eye) @ Fps
    return ScatterSystem(M, S, basis, resp, src, aux, bc)


def assemble_system_condensed(modes, cut, bc, normalize=True):
    """Same system built column by column from ``U(F + iF') - (F - iF')``."""
    check_compatible(bc, cut)
    basis = scatter_basis(modes, cut, normalize)
    resp, src, aux = _traces(basis, cut)
    M = np.column_stack([boundary_operator(bc.U, t.F, t.Fp) for t in list(resp) + list(aux)])
    S = np.column_stack([-boundary_operator(bc.U, t.F, t.Fp) for t in src])
    return ScatterSystem(M, S, basis, resp, src, aux, bc)


@dataclass(frozen=True)
class ScatterSolution:
    R: np.ndarray
    C: np.ndarray
    J: np.ndarray
    residual: float
    condition_estimate: float
    total_trace: BoundaryTrace
    flux_in: float
    flux_out: float

    @property
    def flux_residual(self):
        return abs(self.flux_out - self.flux_in) / max(self.flux_in, 1.0)


def total_trace(system, R, C, J):
    n = system.bc.size
    trace = BoundaryTrace.zeros(n)
    for amp, t in zip(R, system.response_traces):
        trace = trace + t * amp
    for amp, t in zip(C, system.aux_traces):
        trace = trace + t * amp
    for amp, t in zip(J, system.source_traces):
        trace = trace + t * amp
    return trace


def solve_scatter(system, J, singular_cond=SINGULAR_COND):
    basis = system.basis
    beta = len(basis.responses)
    J = np.asarray(J, complex).reshape(-1)
    if J.shape != (beta,):
        raise ConsistencyError(f"J must have length {beta}")
    if not np.all(np.isfinite(J)):
        raise ConsistencyError("J must be finite")
    cond = system.condition
    if not np.isfinite(cond) or cond > singular_cond:
        raise SingularSystemError(basis.k, cond)
    x = np.linalg.solve(system.M, system.source_columns @ J)
    R, C = x[:beta], x[beta:]
    trace = total_trace(system, R, C, J)
    residual = admissibility_residual(trace, system.bc)
    if residual >= 1e-8 * (1 + np.linalg.norm(J)):
        raise ConsistencyError(f"solved trace violates the boundary condition (residual {residual:.3e})")
    prop = basis.propagating
    flux_in = float(sum(abs(J[i]) ** 2 * abs(basis.sources[i].flux) for i in prop))
    flux_out = float(sum(abs(R[i]) ** 2 * abs(basis.responses[i].flux) for i in prop))
    return ScatterSolution(R, C, J, residual, cond, trace, flux_in, flux_out)


@dataclass(frozen=True)
class SMatrix:
    S: np.ndarray
    channels: tuple
    k: float
    R: np.ndarray
    C: np.ndarray

    @property
    def unitarity_residual(self):
        n = self.S.shape[0]
        return float(np.abs(self.S.conj().T @ self.S - np.eye(n)).max())


def system_at(spec, k, bc, cut=None, normalize=True):
    k = check_wavenumber(k)
    cut = cut or build_cut(spec)
    return assemble_system(all_modes(spec, k, cut), cut, bc, normalize)


def scattering_matrix(spec, cut, bc, k):
    """Flux-normalized S-matrix over the propagating channels.

    Column ``j`` holds the propagating response amplitudes produced by unit
    flux incoming in channel ``j``; ``R`` and ``C`` (one column per channel)
    keep the full response including evanescent and auxiliary content.
    """
    system = system_at(spec, k, bc, cut)
    prop = system.basis.propagating
    if not prop:
        raise StopBandError(f"no propagating channels at k={k!r}")
    beta = len(system.basis.responses)
    S = np.empty((len(prop), len(prop)), complex)
    Rs, Cs = [], []
    for j, src in enumerate(prop):
        J = np.zeros(beta, complex)
        J[src] = 1
        sol = solve_scatter(system, J)
        S[:, j] = sol.R[prop]
        Rs.append(sol.R)
        Cs.append(sol.C)
    return SMatrix(S, tuple((p, p) for p in prop), float(k), np.column_stack(Rs), np.column_stack(Cs))


def trace_net_flux(solution):
    """Net flux of the solved total trace across the cut (zero for unitary U)."""
    return trace_flux(solution.total_trace)
