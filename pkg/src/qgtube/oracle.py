"""Finite truncated tube as an explicit sparse system (no Floquet theory).

For a primitive wrap the tube vertices are the classes ``j = beta*m - alpha*n``
with ``sigma = j - 1/2``.  Horizontal edges join ``j`` to ``j + beta``,
vertical edges join ``j`` to ``j + alpha``.  The truncated tube keeps
vertices ``1..N``.  Edges from a discarded vertex (``j <= 0``) survive as
dangling segments from the cut point to their retained end; edges reaching
past ``N`` end in a Dirichlet cap.  Every edge carries ``a e^{ikx} + b e^{-ikx}``
in its own coordinate, with two unknowns per edge.
"""
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .boundary import admissibility_residual, check_compatible
from .core import check_wavenumber
from .dispersion import Direction, all_modes
from .errors import ConsistencyError, OracleInapplicableError, UnsupportedScopeError, ValidationError
from .geometry import HORIZONTAL, VERTICAL
from .scattering import assemble_system, solve_scatter
from .traces import BoundaryTrace

DECAY_TARGET = 1e-8


@dataclass(frozen=True)
class OracleEdge:
    kind: str
    origin: int
    end: int
    x_start: float
    capped: bool


@dataclass
class FiniteTube:
    spec: object
    N: int
    k: float
    edges: list
    A: sparse.csr_matrix
    rhs: np.ndarray
    cut_rows: slice
    cut_edges: list
    cut_x: np.ndarray
    outward: np.ndarray
    amplitudes: np.ndarray = None

    @property
    def n_unknowns(self):
        return 2 * len(self.edges)

    @property
    def n_equations(self):
        return self.A.shape[0]

    def solve(self):
        self.amplitudes = spla.spsolve(self.A.tocsc(), self.rhs)
        return self.amplitudes

    def cut_trace(self):
        if self.amplitudes is None:
            self.solve()
        k = self.k
        F, Fp = [], []
        for e, x, sgn in zip(self.cut_edges, self.cut_x, self.outward):
            a, b = self.amplitudes[2 * e], self.amplitudes[2 * e + 1]
            F.append(a * np.exp(1j * k * x) + b * np.exp(-1j * k * x))
            Fp.append(sgn * 1j * k * (a * np.exp(1j * k * x) - b * np.exp(-1j * k * x)))
        return BoundaryTrace(np.array(F), np.array(Fp))

    def interior_residual(self):
        """Residual of the continuity, Kirchhoff and cap rows after solving."""
        if self.amplitudes is None:
            self.solve()
        r = self.A @ self.amplitudes - self.rhs
        mask = np.ones(len(r), bool)
        mask[self.cut_rows] = False
        return float(np.abs(r[mask]).max(initial=0.0))


def _wave_row(k, x):
    return np.exp(1j * k * x), np.exp(-1j * k * x)


def _deriv_row(k, x):
    return 1j * k * np.exp(1j * k * x), -1j * k * np.exp(-1j * k * x)


def build_finite_tube(spec, cut, bc, N, k, source_trace=None):
    """Assemble the truncated tube with ``U`` at the cut and Dirichlet at the cap.

    ``source_trace`` (a :class:`BoundaryTrace`) is an externally prescribed
    field at the cut; the unknown field ``u`` then satisfies
    ``(U-I)(F_u + F_s) + i(U+I)(F_u' + F_s') = 0``.
    """
    if spec.delta != 1:
        raise UnsupportedScopeError("finite oracle requires delta = 1")
    if int(N) != N or N < 2:
        raise ValidationError(f"ring count N must be an integer >= 2, got {N!r}")
    check_compatible(bc, cut)
    k = check_wavenumber(k)
    a, b = spec.alpha, spec.beta
    cut_by_key = {(e.kind, e.origin_class): (i, e) for i, e in enumerate(cut.severed)}

    edges = []
    for kind, step in ((HORIZONTAL, b), (VERTICAL, a)):
        for origin in range(1 - step, N + 1):
            x0 = 0.0
            if origin <= 0:
                _, sev = cut_by_key[(kind, origin)]
                x0 = sev.cut_x
            edges.append(OracleEdge(kind, origin, origin + step, x0, origin + step > N))
    # banded ordering along the tube
    edges.sort(key=lambda e: (min(e.origin, e.end), e.kind))
    index = {(e.kind, e.origin): i for i, e in enumerate(edges)}

    rows, cols, vals = [], [], []
    rhs = []

    def add(row, edge_idx, ca, cb):
        rows.extend((row, row))
        cols.extend((2 * edge_idx, 2 * edge_idx + 1))
        vals.extend((ca, cb))

    r = 0
    for j in range(1, N + 1):
        ends = [
            (index[(HORIZONTAL, j)], 0.0, 1.0),
            (index[(HORIZONTAL, j - b)], 1.0, -1.0),
            (index[(VERTICAL, j)], 0.0, 1.0),
            (index[(VERTICAL, j - a)], 1.0, -1.0),
        ]
        e0, x0, _ = ends[0]
        for ei, xi, _ in ends[1:]:
            add(r, e0, *_wave_row(k, x0))
            ca, cb = _wave_row(k, xi)
            add(r, ei, -ca, -cb)
            rhs.append(0)
            r += 1
        for ei, xi, sign in ends:
            ca, cb = _deriv_row(k, xi)
            add(r, ei, sign * ca / k, sign * cb / k)
        rhs.append(0)
        r += 1
    for i, e in enumerate(edges):
        if e.capped:
            add(r, i, *_wave_row(k, 1.0))
            rhs.append(0)
            r += 1

    n = cut.size
    U = bc.U
    eye = np.eye(n)
    P = U - eye
    Q = 1j * (U + eye)
    cut_edges, cut_x, outward = [], [], []
    for sev in cut.severed:
        cut_edges.append(index[(sev.kind, sev.origin_class)])
        cut_x.append(sev.cut_x)
        outward.append(sev.outward_sign)
    if source_trace is None:
        source_rhs = np.zeros(n, complex)
    else:
        source_rhs = -(P @ source_trace.F + Q @ source_trace.Fp)
    cut_start = r
    for i in range(n):
        for l in range(n):
            fa, fb = _wave_row(k, cut_x[l])
            da, db = _deriv_row(k, cut_x[l])
            da, db = outward[l] * da, outward[l] * db
            add(r, cut_edges[l], P[i, l] * fa + Q[i, l] * da, P[i, l] * fb + Q[i, l] * db)
        rhs.append(source_rhs[i])
        r += 1

    n_unknowns = 2 * len(edges)
    if r != n_unknowns:
        raise ConsistencyError(f"finite tube has {r} equations for {n_unknowns} unknowns")
    A = sparse.coo_matrix((vals, (rows, cols)), shape=(r, n_unknowns)).tocsr()
    A.sum_duplicates()
    return FiniteTube(
        spec, int(N), k, edges, A, np.array(rhs, complex), slice(cut_start, r),
        cut_edges, np.array(cut_x), np.array(outward, float),
    )


def rings_needed(tau_max, target=DECAY_TARGET):
    """Smallest N with ``tau_max**N < target``."""
    if not 0 < tau_max < 1:
        raise OracleInapplicableError("response modes must be strictly decaying")
    return max(2, int(np.floor(np.log(target) / np.log(tau_max))) + 1)


@dataclass(frozen=True)
class OracleReport:
    k: float
    N: int
    tau_max: float
    deviation_F: float
    deviation_Fp: float
    interior_residual: float
    admissibility_residual: float

    @property
    def deviation(self):
        return max(self.deviation_F, self.deviation_Fp)


def oracle_compare(spec, cut, bc, k, J, N=None, enforce_decay=True):
    """Compare boundary traces of the modal solution and the finite tube.

    ``J`` drives the source modes of the modal basis; the finite tube receives
    the same source trace as an inhomogeneity.  With ``N=None`` the smallest
    ring count meeting the decay bound is used.
    """
    k = check_wavenumber(k)
    modes = all_modes(spec, k, cut)
    if any(m.direction in (Direction.PROPAGATING_RESPONSE, Direction.BAND_EDGE) for m in modes):
        raise OracleInapplicableError(
            f"k={k!r} is not in a stop band: propagating responses would reach the far cap"
        )
    tau_max = max(m.axis_decay for m in modes if m.direction.is_response)
    if N is None:
        N = rings_needed(tau_max)
    elif enforce_decay and tau_max**N >= DECAY_TARGET:
        raise ValidationError(
            f"N={N} too small: tau_max^N = {tau_max**N:.3e} >= {DECAY_TARGET:g}; need N >= {rings_needed(tau_max)}"
        )
    system = assemble_system(modes, cut, bc)
    sol = solve_scatter(system, J)
    src = BoundaryTrace.zeros(cut.size)
    for amp, t in zip(sol.J, system.source_traces):
        src = src + t * amp
    modal_response = sol.total_trace + src * -1

    tube = build_finite_tube(spec, cut, bc, N, k, source_trace=src)
    tube.solve()
    finite = tube.cut_trace()
    return OracleReport(
        k=k,
        N=int(N),
        tau_max=float(tau_max),
        deviation_F=float(np.abs(finite.F - modal_response.F).max()),
        deviation_Fp=float(np.abs(finite.Fp - modal_response.Fp).max()),
        interior_residual=tube.interior_residual(),
        admissibility_residual=admissibility_residual(finite + src, bc),
    )
