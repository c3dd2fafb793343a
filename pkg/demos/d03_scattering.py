"""
Scattering off a self-adjoint cut
=================================

A unitary U at the cut closes the half-infinite tube.  Incoming channels
scatter into outgoing ones, and the flux-normalized S-matrix is unitary.
"""
import numpy as np

from qgtube import build_cut, make_wrapping
from qgtube.boundary import named_bc, random_cayley_bc
from qgtube.scattering import scattering_matrix

rng = np.random.default_rng(3)

# (1,1) has a single channel: Neumann can only change the phase
spec = make_wrapping(1, 1)
cut = build_cut(spec)
sm = scattering_matrix(spec, cut, named_bc("neumann", cut.size), 1.0)
print("(1,1) Neumann S =", np.round(sm.S, 6), " |S| =", abs(sm.S[0, 0]))

# (1,2) above pi/2 has two channels, so a generic U mixes them
spec = make_wrapping(1, 2)
cut = build_cut(spec)
bc = random_cayley_bc(cut.size, rng)
for k in (1.0, 1.9, 2.1):
    sm = scattering_matrix(spec, cut, bc, k)
    print(f"k={k}: channels={len(sm.channels)}  unitarity residual={sm.unitarity_residual:.1e}")
    print(np.round(np.abs(sm.S) ** 2, 4))
