from fractions import Fraction

import pytest

from qgtube import make_wrapping
from qgtube.errors import UnsupportedScopeError
from qgtube.geometry import HORIZONTAL, VERTICAL, boundary_order, build_cut, primitive_cut

WRAPS = [(a, b) for b in range(1, 8) for a in range(1, b + 1) if __import__("math").gcd(a, b) == 1]


def test_hand_cut_23():
    cut = build_cut(make_wrapping(2, 3))
    got = [(e.kind, e.t, e.cut_x) for e in cut.severed]
    want = [
        (HORIZONTAL, 0, Fraction(1, 6)),
        (HORIZONTAL, Fraction(1, 3), Fraction(5, 6)),
        (VERTICAL, Fraction(5, 12), Fraction(3, 4)),
        (HORIZONTAL, Fraction(2, 3), Fraction(1, 2)),
        (VERTICAL, Fraction(11, 12), Fraction(1, 4)),
    ]
    assert [g[0] for g in got] == [w[0] for w in want]
    for (_, t, x), (_, tw, xw) in zip(got, want):
        assert t == pytest.approx(float(tw), abs=1e-14)
        assert x == pytest.approx(float(xw), abs=1e-14)
    assert [e.cell for e in cut.severed] == [(0, 0), (0, 1), (1, 2), (1, 2), (2, 3)]


def test_hand_cut_11():
    cut = build_cut(make_wrapping(1, 1))
    assert [(e.kind, e.cell) for e in cut.severed] == [(HORIZONTAL, (0, 0)), (VERTICAL, (1, 1))]
    assert all(e.cut_x == pytest.approx(0.5) for e in cut.severed)
    assert len(cut.anchors) == 1
    assert cut.anchors[0].vertex == (1, 0)


@pytest.mark.parametrize("raw", WRAPS)
def test_counts_and_sides(raw):
    spec = make_wrapping(*raw)
    cut = build_cut(spec)
    kinds = [e.kind for e in cut.severed]
    assert kinds.count(HORIZONTAL) == spec.beta
    assert kinds.count(VERTICAL) == spec.alpha
    assert cut.size == spec.n_boundary
    assert len(cut.anchors) == spec.alpha
    ts = [e.t for e in cut.severed]
    assert ts == sorted(ts) and 0 <= ts[0] and ts[-1] < 1
    for e in cut.severed:
        assert 0 < e.cut_x < 1
        kept = e.retained_vertex
        assert cut.sigma(*kept) > 0
        assert cut.vertex_class(*kept) >= 1
        assert e.retained_end == 1 and e.outward_sign == -1
        if e.kind == HORIZONTAL:
            assert 1 - spec.beta <= e.origin_class <= 0
            assert e.dangling_length == pytest.approx((e.origin_class + spec.beta - 0.5) / spec.beta)
        else:
            assert 1 - spec.alpha <= e.origin_class <= 0
            assert e.dangling_length == pytest.approx((e.origin_class + spec.alpha - 0.5) / spec.alpha)
    classes = sorted(cut.vertex_class(*a.vertex) for a in cut.anchors)
    assert classes == list(range(1, spec.alpha + 1))
    for a in cut.anchors:
        assert cut.severed[a.h_edge].kind == HORIZONTAL
        assert cut.severed[a.v_edge].kind == VERTICAL
        assert a.h_len == pytest.approx(cut.severed[a.h_edge].dangling_length)


@pytest.mark.parametrize("raw", [(1, 1), (2, 3), (3, 7)])
def test_order_stable(raw):
    spec = make_wrapping(*raw)
    assert boundary_order(build_cut(spec)) == boundary_order(build_cut(spec))
    assert boundary_order(build_cut(spec)) == [(e.kind, e.cell) for e in build_cut(spec).severed]


def test_delta_not_one_rejected():
    with pytest.raises(UnsupportedScopeError):
        build_cut(make_wrapping(2, 4))
    assert primitive_cut(make_wrapping(2, 4)).size == 3
