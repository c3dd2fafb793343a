import time

import numpy as np
import pytest

from qgtube import make_wrapping
from qgtube.boundary import named_bc, random_cayley_bc
from qgtube.errors import OracleInapplicableError, UnsupportedScopeError, ValidationError
from qgtube.geometry import build_cut, primitive_cut
from qgtube.oracle import build_finite_tube, oracle_compare, rings_needed

SPEC12 = make_wrapping(1, 2)
CUT12 = build_cut(SPEC12)


def test_rings_needed():
    assert rings_needed(0.5) == 27
    assert 0.5**27 < 1e-8 <= 0.5**26
    with pytest.raises(OracleInapplicableError):
        rings_needed(1.0)


@pytest.mark.parametrize("k", [2.3, 2.5, 2.9])
def test_stop_band_agreement(k, rng):
    bc = random_cayley_bc(3, rng)
    J = rng.normal(size=2) + 1j * rng.normal(size=2)
    rep = oracle_compare(SPEC12, CUT12, bc, k, J)
    assert rep.tau_max**rep.N < 1e-8
    assert rep.deviation < 1e-6
    assert rep.interior_residual < 1e-10
    assert rep.admissibility_residual < 1e-10


def test_deviation_shrinks_with_N(rng):
    bc = random_cayley_bc(3, rng)
    J = np.array([1.0, 0.5j])
    devs = [oracle_compare(SPEC12, CUT12, bc, 2.5, J, N=N, enforce_decay=False).deviation for N in (5, 10, 20)]
    assert devs[1] < devs[0] and devs[2] < devs[1]
    # geometric decay at rate about tau^(2N)
    tau = oracle_compare(SPEC12, CUT12, bc, 2.5, J).tau_max
    assert devs[1] / devs[0] < 10 * tau**10


def test_zero_source(rng):
    rep = oracle_compare(SPEC12, CUT12, random_cayley_bc(3, rng), 2.5, [0, 0])
    assert rep.deviation == 0


@pytest.mark.parametrize("N", [2, 5, 10])
def test_square_system(N, rng):
    for raw in [(1, 2), (2, 3), (3, 5)]:
        spec = make_wrapping(*raw)
        cut = build_cut(spec)
        tube = build_finite_tube(spec, cut, random_cayley_bc(cut.size, rng), N, 2.7)
        assert tube.n_equations == tube.n_unknowns


def test_runtime_N40(rng):
    bc = random_cayley_bc(3, rng)
    t0 = time.perf_counter()
    oracle_compare(SPEC12, CUT12, bc, 2.5, [1, 1], N=40)
    assert time.perf_counter() - t0 < 1.0


def test_pass_band_rejected():
    with pytest.raises(OracleInapplicableError):
        oracle_compare(SPEC12, CUT12, named_bc("neumann", 3), 1.0, [1, 0])
    spec = make_wrapping(1, 1)
    for k in np.linspace(0.1, 3.0, 30):
        with pytest.raises(OracleInapplicableError):
            oracle_compare(spec, build_cut(spec), named_bc("neumann", 2), k, [1])


def test_preconditions():
    bc = named_bc("neumann", 3)
    with pytest.raises(ValidationError):
        oracle_compare(SPEC12, CUT12, bc, 2.5, [1, 0], N=5)
    with pytest.raises(ValidationError):
        build_finite_tube(SPEC12, CUT12, bc, 1, 2.5)
    spec = make_wrapping(2, 4)
    with pytest.raises(UnsupportedScopeError):
        build_finite_tube(spec, primitive_cut(spec), bc, 5, 2.5)
