"""
Checking the modal solution against a finite tube
=================================================

In a stop band the response decays along the tube, so a truncated tube with
a Dirichlet cap reproduces the cut traces.  The gap shrinks like tau^(2N).
"""
import numpy as np

from qgtube import build_cut, make_wrapping
from qgtube.boundary import random_cayley_bc
from qgtube.oracle import oracle_compare

spec = make_wrapping(1, 2)
cut = build_cut(spec)
bc = random_cayley_bc(cut.size, np.random.default_rng(5))
J = np.array([1.0, 0.5 - 0.5j])

rep = oracle_compare(spec, cut, bc, 2.5, J)
print(f"tau_max={rep.tau_max:.4f}  default N={rep.N}  deviation={rep.deviation:.2e}")

for N in (4, 8, 16, 32):
    r = oracle_compare(spec, cut, bc, 2.5, J, N=N, enforce_decay=False)
    print(f"N={N:3d}  deviation={r.deviation:.2e}  tau^(2N)={rep.tau_max ** (2 * N):.2e}")
