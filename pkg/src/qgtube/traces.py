"""Boundary traces, mode fluxes and interior vertex checks.

A trace lists, for each cut point in boundary order, the field value ``F`` and
the *outward* derivative ``F'`` (pointing out of the retained structure).
"""
from dataclasses import dataclass

import numpy as np

from .core import EdgeWave
from .errors import ConsistencyError
from .geometry import HORIZONTAL, VERTICAL


@dataclass(frozen=True)
class BoundaryTrace:
    F: np.ndarray
    Fp: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.F, dtype=complex)
        Fp = np.asarray(self.Fp, dtype=complex)
        if F.shape != Fp.shape or F.ndim != 1:
            raise ConsistencyError("F and F' must be 1-d vectors of equal length")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "Fp", Fp)

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, complex), np.zeros(n, complex))

    def __len__(self):
        return len(self.F)

    def __add__(self, other):
        return BoundaryTrace(self.F + other.F, self.Fp + other.Fp)

    def __mul__(self, factor):
        return BoundaryTrace(self.F * factor, self.Fp * factor)

    __rmul__ = __mul__

    def sup_norm(self):
        return float(max(np.abs(self.F).max(initial=0.0), np.abs(self.Fp).max(initial=0.0)))


@dataclass(frozen=True)
class AuxMode:
    """``c*sin(k*s)`` / ``-c*sin(k*s)`` on the two dangling segments of an anchor.

    ``s`` is the distance from the anchor vertex; ``anchor`` indexes
    ``cut.anchors``.
    """

    anchor: int
    c: complex
    k: float


def cell_phase(mode, cell):
    m, n = cell
    return mode.z1**m * mode.z2**n


def mode_edge_wave(mode, kind, cell):
    base = mode.coeffs.horizontal(mode.k) if kind == HORIZONTAL else mode.coeffs.vertical(mode.k)
    return base * cell_phase(mode, cell)


def _check_mode(mode, cut):
    if (mode.spec.alpha, mode.spec.beta) != (cut.spec.alpha, cut.spec.beta):
        raise ConsistencyError("mode and cut belong to different wraps")


def mode_trace(mode, cut):
    _check_mode(mode, cut)
    F = np.empty(cut.size, complex)
    Fp = np.empty(cut.size, complex)
    for i, edge in enumerate(cut.severed):
        w = mode_edge_wave(mode, edge.kind, edge.cell)
        F[i] = w.value(edge.cut_x)
        Fp[i] = edge.outward_sign * w.deriv(edge.cut_x)
    return BoundaryTrace(F, Fp)


def aux_edge_wave(aux, cut, edge_index):
    """The auxiliary field on one severed edge, in that edge's own coordinate."""
    anchor = cut.anchors[aux.anchor]
    if edge_index == anchor.h_edge:
        c = aux.c
    elif edge_index == anchor.v_edge:
        c = -aux.c
    else:
        return EdgeWave(0j, 0j, aux.k)
    k = aux.k
    if cut.severed[edge_index].retained_end == 1:
        # c sin(k(1 - x))
        return EdgeWave(-c * np.exp(-1j * k) / 2j, c * np.exp(1j * k) / 2j, k)
    return EdgeWave(c / 2j, -c / 2j, k)


def aux_trace(aux, cut):
    if not 0 <= aux.anchor < len(cut.anchors):
        raise ConsistencyError(f"anchor index {aux.anchor} not in cut")
    anchor = cut.anchors[aux.anchor]
    F = np.zeros(cut.size, complex)
    Fp = np.zeros(cut.size, complex)
    k, c = aux.k, aux.c
    F[anchor.h_edge] = c * np.sin(k * anchor.h_len)
    Fp[anchor.h_edge] = c * k * np.cos(k * anchor.h_len)
    F[anchor.v_edge] = -c * np.sin(k * anchor.v_len)
    Fp[anchor.v_edge] = -c * k * np.cos(k * anchor.v_len)
    return BoundaryTrace(F, Fp)


def trace_flux(trace):
    """Net flux into the retained tube carried by a boundary trace."""
    return float(np.sum(np.imag(np.conj(trace.F) * -trace.Fp)))


def mode_flux(mode, cut):
    return trace_flux(mode_trace(mode, cut))


@dataclass(frozen=True)
class VertexResidual:
    continuity: float
    kirchhoff: float
    scale: float
    n_vertices: int

    @property
    def worst(self):
        return max(self.continuity, self.kirchhoff)

    @property
    def relative(self):
        """Worst residual divided by the field's peak on the patch (if above 1)."""
        return self.worst / self.scale


def retained_patch(cut, size=10, center=None):
    """Vertices of a ``size x size`` block around a cut anchor with ``sigma > 0``."""
    if center is None:
        center = cut.anchors[0].vertex if cut.anchors else (1, 0)
    m0, n0 = center[0] - size // 2, center[1] - size // 2
    return [
        (m, n)
        for m in range(m0, m0 + size)
        for n in range(n0, n0 + size)
        if cut.sigma(m, n) > 0
    ]


def _edge_field(cut, terms, aux_modes, kind, cell, k):
    w = EdgeWave(0j, 0j, k)
    for mode, amp in terms:
        w = w + mode_edge_wave(mode, kind, cell) * amp
    if aux_modes:
        idx = cut.severed_index(kind, cut.vertex_class(*cell))
        if idx is not None:
            for aux in aux_modes:
                w = w + aux_edge_wave(aux, cut, idx)
    return w


def vertex_residuals(cut, terms, aux_modes=(), cells=None, k=None):
    """Continuity and Kirchhoff residuals of a superposition at retained vertices.

    ``terms`` is a sequence of ``(mode, amplitude)`` pairs; ``aux_modes`` a
    sequence of :class:`AuxMode`.  ``cells`` defaults to
    :func:`retained_patch` of size 10.
    """
    terms = list(terms)
    aux_modes = list(aux_modes)
    if k is None:
        k = terms[0][0].k if terms else aux_modes[0].k
    for mode, _ in terms:
        _check_mode(mode, cut)
    if cells is None:
        cells = retained_patch(cut)
    cont = kirch = 0.0
    peak = 1.0
    for m, n in cells:
        if cut.sigma(m, n) <= 0:
            raise ConsistencyError(f"vertex {(m, n)} is not in the retained region")
        ends = (
            (HORIZONTAL, (m, n), 0.0, 1.0),
            (HORIZONTAL, (m - 1, n), 1.0, -1.0),
            (VERTICAL, (m, n), 0.0, 1.0),
            (VERTICAL, (m, n + 1), 1.0, -1.0),
        )
        values, outgoing = [], []
        for kind, cell, x, sign in ends:
            w = _edge_field(cut, terms, aux_modes, kind, cell, k)
            values.append(w.value(x))
            outgoing.append(sign * w.deriv(x))
        values = np.array(values)
        outgoing = np.array(outgoing)
        cont = max(cont, float(np.abs(values - values[0]).max()))
        kirch = max(kirch, float(abs(outgoing.sum())))
        peak = max(peak, float(np.abs(values).max()), float(np.abs(outgoing).max() / abs(k)))
    return VertexResidual(cont, kirch, peak, len(cells))
