import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgtube.boundary import (
    UnitaryBC,
    admissibility_residual,
    admissible_trace,
    boundary_form,
    check_compatible,
    load_hermitian,
    load_unitary,
    named_bc,
    random_cayley_bc,
    save_matrix,
    unitary_from_hermitian,
    unitary_mapping,
)
from qgtube import make_wrapping
from qgtube.errors import ConsistencyError, ValidationError
from qgtube.geometry import build_cut
from qgtube.traces import BoundaryTrace


def test_named():
    assert np.array_equal(named_bc("neumann", 3).U, np.eye(3))
    assert np.array_equal(named_bc("dirichlet", 2).U, -np.eye(2))
    with pytest.raises(ValidationError):
        named_bc("robin", 2)
    with pytest.raises(ValidationError):
        named_bc("neumann", 0)


def test_rejects_non_unitary():
    with pytest.raises(ValidationError):
        UnitaryBC(np.array([[1, 0], [0, 1.01]]))
    with pytest.raises(ValidationError):
        UnitaryBC(np.ones((2, 3)))


def test_read_only():
    bc = named_bc("neumann", 2)
    with pytest.raises(ValueError):
        bc.U[0, 0] = 2


def test_cayley_examples():
    assert unitary_from_hermitian([[1.0]]).U[0, 0] == pytest.approx(-1j)
    assert np.allclose(unitary_from_hermitian(np.zeros((3, 3))).U, -np.eye(3))
    with pytest.raises(ValidationError):
        unitary_from_hermitian([[0, 1], [2, 0]])


def test_dirichlet_neumann_admissibility():
    F = np.array([0, 0j])
    Fp = np.array([1.0, -2j])
    assert admissibility_residual(BoundaryTrace(F, Fp), named_bc("dirichlet", 2)) < 1e-15
    assert admissibility_residual(BoundaryTrace(Fp, F), named_bc("neumann", 2)) < 1e-15
    assert admissibility_residual(BoundaryTrace(Fp, F), named_bc("dirichlet", 2)) > 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_admissible_projection(n, seed):
    rng = np.random.default_rng(seed)
    bc = random_cayley_bc(n, rng)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    tr = admissible_trace(bc, a)
    assert admissibility_residual(tr, bc) < 1e-8 * max(1, tr.sup_norm())
    # every admissible trace is recovered from a = (F + iF')/2
    assert np.allclose((tr.F + 1j * tr.Fp) / 2, a)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_norm_identity_and_form(n, seed):
    rng = np.random.default_rng(seed)
    bc = random_cayley_bc(n, rng)
    t1 = admissible_trace(bc, rng.normal(size=n) + 1j * rng.normal(size=n))
    t2 = admissible_trace(bc, rng.normal(size=n) + 1j * rng.normal(size=n))
    assert np.linalg.norm(t1.F + 1j * t1.Fp) == pytest.approx(np.linalg.norm(t1.F - 1j * t1.Fp))
    scale = t1.sup_norm() * t2.sup_norm() * n
    assert abs(boundary_form(t1, t2)) < 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_form_antisymmetry(n, seed):
    rng = np.random.default_rng(seed)
    r = lambda: rng.normal(size=n) + 1j * rng.normal(size=n)  # noqa: E731
    t1, t2 = BoundaryTrace(r(), r()), BoundaryTrace(r(), r())
    assert boundary_form(t1, t2) == pytest.approx(-np.conj(boundary_form(t2, t1)))


def test_unitary_mapping(rng):
    a = rng.normal(size=5) + 1j * rng.normal(size=5)
    b = rng.normal(size=5) + 1j * rng.normal(size=5)
    b *= np.linalg.norm(a) / np.linalg.norm(b)
    bc = unitary_mapping(a, b, rng)
    assert np.allclose(bc.U @ a, b)
    with pytest.raises(ValidationError):
        unitary_mapping(a, 2 * b)


def test_json_round_trip(tmp_path, rng):
    bc = random_cayley_bc(3, rng)
    p = tmp_path / "u.json"
    save_matrix(p, bc.U)
    assert np.allclose(load_unitary(p).U, bc.U)
    H = np.diag([1.0, -2.0])
    save_matrix(tmp_path / "h.json", H)
    assert np.allclose(load_hermitian(tmp_path / "h.json"), H)


def test_json_validation(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"size": 2, "re": [[1, 0]], "im": [[0, 0]]}))
    with pytest.raises(ValidationError):
        load_unitary(p)
    p.write_text(json.dumps({"size": 1, "re": [[2]], "im": [[0]]}))
    with pytest.raises(ValidationError):
        load_unitary(p)
    p.write_text(json.dumps({"size": 1, "im": [[0]]}))
    with pytest.raises(ValidationError):
        load_unitary(p)
    p.write_text(json.dumps({"size": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]}))
    with pytest.raises(ValidationError):
        load_hermitian(p)


def test_size_mismatch():
    cut = build_cut(make_wrapping(1, 2))
    with pytest.raises(ConsistencyError):
        check_compatible(named_bc("neumann", 2), cut)
    check_compatible(named_bc("neumann", 3), cut)
    with pytest.raises(ValidationError):
        admissibility_residual(BoundaryTrace.zeros(2), named_bc("neumann", 3))
