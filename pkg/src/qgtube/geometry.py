"""Straight cut of the tube along its wrap vector.

The cut line is ``L(t) = (theta + t*alpha, t*beta)``; points with
``sigma(x, y) = beta*(x - theta) - alpha*y > 0`` (below and to the right of the
line) are kept.  With ``theta = 1/(2*beta)`` no lattice vertex lies on the
line, so each period ``t in [0, 1)`` severs exactly ``beta`` horizontal and
``alpha`` vertical edges transversally.

Vertices are also labelled by their *class* ``j = beta*m - alpha*n``.  For a
primitive wrap the class identifies a tube vertex uniquely and
``sigma = j - 1/2`` at every vertex, so the retained tube is ``j >= 1``.
"""
from dataclasses import dataclass
from math import ceil, floor

import numpy as np

from .core import WrappingSpec
from .errors import GeometryError, UnsupportedScopeError

HORIZONTAL = "h"
VERTICAL = "v"
ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class SeveredEdge:
    """An edge crossed by the cut.

    ``cell`` is the edge's origin vertex (``x = 0``); ``cut_x`` the edge
    coordinate of the crossing; ``retained_end`` the coordinate (0 or 1) of the
    endpoint that survives; ``outward_sign`` converts ``d/dx`` into the
    derivative pointing out of the retained structure.
    """

    cell: tuple
    kind: str
    cut_x: float
    t: float
    retained_end: int
    outward_sign: int
    origin_class: int

    @property
    def dangling_length(self):
        return 1.0 - self.cut_x if self.retained_end == 1 else self.cut_x

    @property
    def retained_vertex(self):
        m, n = self.cell
        if self.retained_end == 0:
            return (m, n)
        return (m + 1, n) if self.kind == HORIZONTAL else (m, n - 1)


@dataclass(frozen=True)
class AuxAnchor:
    vertex: tuple
    h_edge: int
    v_edge: int
    h_len: float
    v_len: float


@dataclass(frozen=True)
class CutGeometry:
    spec: WrappingSpec
    theta: float
    severed: tuple
    anchors: tuple

    @property
    def size(self):
        return len(self.severed)

    def sigma(self, x, y):
        return self.spec.beta * (x - self.theta) - self.spec.alpha * y

    def vertex_class(self, m, n):
        return self.spec.beta * m - self.spec.alpha * n

    def severed_index(self, kind, origin_class):
        """Index of the severed edge of ``kind`` whose origin has this class, or None."""
        for i, edge in enumerate(self.severed):
            if edge.kind == kind and edge.origin_class == origin_class:
                return i
        return None


def _endpoints(kind, cell):
    m, n = cell
    return ((m, n), (m + 1, n)) if kind == HORIZONTAL else ((m, n), (m, n - 1))


def _severed_edge(spec, theta, kind, cell, cut_x, t):
    def sigma(p):
        return spec.beta * (p[0] - theta) - spec.alpha * p[1]

    start, end = _endpoints(kind, cell)
    s0, s1 = sigma(start), sigma(end)
    if not (s0 * s1 < 0):
        raise GeometryError(f"edge {kind}{cell} is not severed by the cut")
    if min(cut_x, 1 - cut_x) < ENDPOINT_TOL:
        raise GeometryError(f"cut point on edge {kind}{cell} touches a vertex")
    retained_end = 1 if s1 > 0 else 0
    # outward = direction of decreasing sigma along the edge
    outward_sign = -1 if s1 > s0 else 1
    return SeveredEdge(
        cell=cell,
        kind=kind,
        cut_x=cut_x,
        t=t,
        retained_end=retained_end,
        outward_sign=outward_sign,
        origin_class=spec.beta * cell[0] - spec.alpha * cell[1],
    )


def primitive_cut(spec):
    """Cut over one primitive period ``(alpha, beta)``, for any ``delta``.

    Used directly for flux bookkeeping of wraps with ``delta > 1``; scattering
    goes through :func:`build_cut`.
    """
    alpha, beta = spec.alpha, spec.beta
    theta = 1.0 / (2 * beta)
    edges = []
    for n in range(beta):
        t = n / beta
        x = theta + t * alpha
        m = floor(x)
        edges.append(_severed_edge(spec, theta, HORIZONTAL, (m, n), x - m, t))
    for m in range(1, alpha + 1):
        t = (m - theta) / alpha
        y = t * beta
        top = ceil(y)
        edges.append(_severed_edge(spec, theta, VERTICAL, (m, top), top - y, t))
    edges.sort(key=lambda e: e.t)
    cut = CutGeometry(spec=spec, theta=theta, severed=tuple(edges), anchors=())
    return CutGeometry(spec=spec, theta=theta, severed=cut.severed, anchors=tuple(find_anchors(cut)))


def build_cut(spec):
    if spec.delta != 1:
        raise UnsupportedScopeError("cuts and scattering are implemented for delta = 1 only")
    return primitive_cut(spec)


def find_anchors(cut):
    """Vertices carrying both a dangling horizontal and a dangling vertical segment.

    Each severed vertical edge is paired with the severed horizontal edge that
    immediately precedes it along the cut, provided both keep the same vertex.
    """
    anchors = []
    edges = cut.severed
    for i, edge in enumerate(edges):
        if edge.kind != VERTICAL or i == 0:
            continue
        prev = edges[i - 1]
        if prev.kind == HORIZONTAL and prev.retained_vertex == edge.retained_vertex:
            anchors.append(
                AuxAnchor(
                    vertex=edge.retained_vertex,
                    h_edge=i - 1,
                    v_edge=i,
                    h_len=prev.dangling_length,
                    v_len=edge.dangling_length,
                )
            )
    if len(anchors) != cut.spec.alpha:
        raise GeometryError(f"found {len(anchors)} anchors, expected alpha={cut.spec.alpha}")
    return anchors


def boundary_order(cut):
    """Labels ``(kind, cell)`` of the boundary points, in the order used by F, F' and U."""
    order = np.argsort([e.t for e in cut.severed], kind="stable")
    return [(cut.severed[i].kind, cut.severed[i].cell) for i in order]
