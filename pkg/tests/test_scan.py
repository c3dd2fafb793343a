import json

import numpy as np
import pytest

from qgtube import make_wrapping
from qgtube.boundary import named_bc, random_cayley_bc, random_hermitian, unitary_mapping
from qgtube.dispersion import Direction
from qgtube.geometry import build_cut
from qgtube.oracle import build_finite_tube
from qgtube.scan import (
    PROFILE_COLUMNS,
    certify,
    det_profile,
    excluded,
    find_bound_states,
    profile_csv,
    scan_bc_family,
)
from qgtube.scattering import system_at

SPEC12 = make_wrapping(1, 2)
CUT12 = build_cut(SPEC12)


def designed_aux_bc(k, rng):
    """U with the bare auxiliary trace admissible: a trapped state living on the dangling segments."""
    X = system_at(SPEC12, k, named_bc("neumann", 3), CUT12).aux_traces[0]
    return unitary_mapping(X.F + 1j * X.Fp, X.F - 1j * X.Fp, rng)


def designed_evanescent_bc(k, rng):
    """U admitting the decaying evanescent response alone."""
    sys = system_at(SPEC12, k, named_bc("neumann", 3), CUT12)
    i = next(i for i, m in enumerate(sys.basis.responses) if m.direction is Direction.EVANESCENT_RESPONSE)
    T = sys.response_traces[i]
    return unitary_mapping(T.F + 1j * T.Fp, T.F - 1j * T.Fp, rng)


def test_excluded():
    assert excluded(0.0) and excluded(np.pi) and excluded(2 * np.pi + 1e-4)
    assert not excluded(1.0)


def test_negative_control_pass_band(rng):
    for _ in range(3):
        bc = random_cayley_bc(3, rng)
        assert len(find_bound_states(SPEC12, CUT12, bc, (0.2, 2.1), n_grid=60)) == 0
    for k in rng.uniform(0.1, 3.0, 50):
        if abs(k - np.pi / 2) < 1e-3:
            continue
        assert not certify(SPEC12, CUT12, random_cayley_bc(3, rng), k).certified


def test_designed_embedded_aux_state(rng):
    bc = designed_aux_bc(1.9, rng)
    found = find_bound_states(SPEC12, CUT12, bc, (1.8, 2.0), n_grid=40)
    assert len(found) == 1
    c = found.certified[0]
    assert c.k == pytest.approx(1.9, abs=1e-8)
    assert c.embedded and c.n_propagating == 2
    assert c.admissibility_residual < 1e-8 and c.interior_residual < 1e-8
    assert c.propagating_amplitude < 1e-8
    assert np.abs(c.R).max() < 1e-8 and abs(c.C[0]) > 0.5


def test_designed_embedded_evanescent_state(rng):
    bc = designed_evanescent_bc(1.0, rng)
    found = find_bound_states(SPEC12, CUT12, bc, (0.9, 1.1), n_grid=40)
    assert len(found) == 1
    c = found.certified[0]
    assert c.k == pytest.approx(1.0, abs=1e-8)
    assert c.embedded
    assert 0 < c.max_abs_tau < 1


def test_stop_band_state_matches_finite_tube():
    bc = random_cayley_bc(3, np.random.default_rng(0))
    found = find_bound_states(SPEC12, CUT12, bc, (2.2, 3.1), n_grid=80)
    assert len(found) >= 1
    c = found.certified[0]
    assert not c.embedded and c.max_abs_tau < 1

    def rel_sigma(k):
        s = np.linalg.svd(build_finite_tube(SPEC12, CUT12, bc, 40, k).A.toarray(), compute_uv=False)
        return s[-1] / s[0]

    assert rel_sigma(c.k) < 1e-10
    assert rel_sigma(c.k + 0.05) > 1e-4


def test_certificates_persist_under_refinement(rng):
    bc = designed_aux_bc(1.9, rng)
    coarse = find_bound_states(SPEC12, CUT12, bc, (1.8, 2.0), tol=1e-6, n_grid=40)
    fine = find_bound_states(SPEC12, CUT12, bc, (1.8, 2.0), tol=1e-8, n_grid=40)
    assert len(coarse) == len(fine) == 1
    assert abs(coarse.certified[0].k - fine.certified[0].k) < 1e-6


def test_zero_set_independent_of_normalization(rng):
    bc = designed_aux_bc(1.9, rng)
    a = system_at(SPEC12, 1.9, bc, CUT12, normalize=True)
    b = system_at(SPEC12, 1.9, bc, CUT12, normalize=False)
    for sys in (a, b):
        s = np.linalg.svd(sys.M, compute_uv=False)
        assert s[-1] < 1e-12 * s[0]
    off = system_at(SPEC12, 1.95, bc, CUT12, normalize=False)
    s = np.linalg.svd(off.M, compute_uv=False)
    assert s[-1] > 1e-6 * s[0]


def test_det_profile_deterministic_and_flags(rng):
    bc = random_cayley_bc(3, rng)
    grid = [0.5, np.pi / 2, 2.0, 2.5, np.pi]
    p1 = det_profile(SPEC12, CUT12, bc, grid)
    p2 = det_profile(SPEC12, CUT12, bc, grid)
    assert profile_csv(p1) == profile_csv(p2)
    assert [s.band_edge for s in p1] == [False, True, False, False, True]
    assert [s.n_propagating for s in p1][:4:2] == [1, 2]
    lines = profile_csv(p1).splitlines()
    assert lines[0].split(",") == PROFILE_COLUMNS
    assert len(lines) == 6


def test_family_scan_constant_direction(rng):
    H = random_hermitian(3, rng)
    surf = scan_bc_family(SPEC12, CUT12, H, np.zeros((3, 3)), [0.0, 1.0, 2.0], np.linspace(0.3, 1.4, 12))
    assert np.allclose(surf.sigma[0], surf.sigma[1]) and np.allclose(surf.sigma[0], surf.sigma[2])
    rows = surf.to_csv().splitlines()
    assert rows[0] == "s,k,sigma_min"
    assert len(rows) == 1 + 3 * 12
    assert [r.split(",")[0] for r in rows[1:13]] == ["0.0"] * 12


def test_certificate_serializable(rng):
    c = certify(SPEC12, CUT12, designed_aux_bc(1.9, rng), 1.9)
    d = json.loads(json.dumps(c.to_dict()))
    assert d["certified"] is True
    assert d["k"] == pytest.approx(1.9)
