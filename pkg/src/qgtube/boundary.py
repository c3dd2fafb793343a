"""Unitary boundary conditions ``U (F + iF') = F - iF'`` at the cut.

``F'`` is the outward derivative, so ``U = I`` is Neumann and ``U = -I`` is
Dirichlet.
"""
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConsistencyError, ValidationError

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class UnitaryBC:
    U: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        U = np.array(self.U, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] < 1:
            raise ValidationError(f"U must be a nonempty square matrix, got shape {U.shape}")
        err = unitarity_residual(U)
        if err >= UNITARY_TOL:
            raise ValidationError(f"U is not unitary (residual {err:.3e})")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def size(self):
        return self.U.shape[0]


def unitarity_residual(U):
    U = np.asarray(U)
    return float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())


def named_bc(name, size):
    if int(size) != size or size < 1:
        raise ValidationError(f"size must be a positive integer, got {size!r}")
    if name == "dirichlet":
        return UnitaryBC(-np.eye(size), "dirichlet")
    if name == "neumann":
        return UnitaryBC(np.eye(size), "neumann")
    raise ValidationError(f"unknown boundary condition {name!r} (expected 'dirichlet' or 'neumann')")


def unitary_from_hermitian(H, label="cayley"):
    """Cayley transform ``(H - iI)(H + iI)^-1``; ``H = 0`` gives Dirichlet."""
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if H.shape[0] != H.shape[1]:
        raise ValidationError("H must be square")
    if np.abs(H - H.conj().T).max() >= HERMITIAN_TOL:
        raise ValidationError("H is not Hermitian")
    eye = np.eye(H.shape[0])
    # (H - iI) and (H + iI)^-1 commute; solve on the right
    U = np.linalg.solve((H + 1j * eye).T, (H - 1j * eye).T).T
    return UnitaryBC(U, label)


def random_hermitian(size, rng):
    A = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return (A + A.conj().T) / 2


def random_cayley_bc(size, rng):
    return unitary_from_hermitian(random_hermitian(size, rng), "random-cayley")


def unitary_mapping(a, b, rng=None, label="mapping"):
    """A unitary ``U`` with ``U a = b`` for vectors of equal norm.

    The complement is filled with a random (seeded) unitary, so different
    ``rng`` states give different completions.
    """
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or abs(na - nb) > 1e-10 * max(na, nb):
        raise ValidationError("vectors must be nonzero with equal norms")
    rng = rng or np.random.default_rng(0)
    n = len(a)

    def basis(v):
        M = np.column_stack([v / np.linalg.norm(v), rng.normal(size=(n, n - 1)) + 1j * rng.normal(size=(n, n - 1))])
        Q, R = np.linalg.qr(M)
        # make the first column exactly v/|v|
        Q[:, 0] *= R[0, 0] / abs(R[0, 0])
        return Q

    U = basis(b) @ basis(a).conj().T
    return UnitaryBC(U, label)


def boundary_form(t1, t2):
    """``sum(F1' conj(F2) - F1 conj(F2'))``, zero for two admissible traces."""
    if len(t1) != len(t2):
        raise ValidationError("trace lengths differ")
    return complex(np.sum(t1.Fp * np.conj(t2.F) - t1.F * np.conj(t2.Fp)))


def boundary_operator(U, F, Fp):
    """``U(F + iF') - (F - iF')``; vanishes exactly on admissible traces."""
    return U @ (F + 1j * Fp) - (F - 1j * Fp)


def admissibility_residual(trace, bc):
    if len(trace) != bc.size:
        raise ValidationError(f"trace length {len(trace)} does not match U size {bc.size}")
    return float(np.abs(boundary_operator(bc.U, trace.F, trace.Fp)).max())


def admissible_trace(bc, a):
    """The admissible trace ``F = (I+U)a, F' = -i(I-U)a``.

    Every admissible trace arises this way, with ``a = (F + iF')/2``.
    """
    from .traces import BoundaryTrace

    a = np.asarray(a, complex)
    eye = np.eye(bc.size)
    return BoundaryTrace((eye + bc.U) @ a, -1j * (eye - bc.U) @ a)


def _matrix_from_json(data, what):
    try:
        n = int(data["size"])
        M = np.array(data["re"], float) + 1j * np.array(data["im"], float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed {what} file: {exc}") from exc
    if M.shape != (n, n):
        raise ValidationError(f"{what} file declares size {n} but holds shape {M.shape}")
    return M


def matrix_to_json(M):
    M = np.asarray(M, complex)
    return {"size": M.shape[0], "re": M.real.tolist(), "im": M.imag.tolist()}


def load_unitary(path):
    """Read ``{"size": n, "re": [[...]], "im": [[...]]}`` and validate unitarity."""
    data = json.loads(Path(path).read_text())
    return UnitaryBC(_matrix_from_json(data, "unitary"), f"file:{path}")


def load_hermitian(path):
    data = json.loads(Path(path).read_text())
    H = _matrix_from_json(data, "hermitian")
    if np.abs(H - H.conj().T).max() >= HERMITIAN_TOL:
        raise ValidationError(f"matrix in {path} is not Hermitian")
    return H


def save_matrix(path, M):
    Path(path).write_text(json.dumps(matrix_to_json(M)))


def check_compatible(bc, cut):
    if bc.size != cut.size:
        raise ConsistencyError(f"U has size {bc.size} but the cut has {cut.size} boundary points")
