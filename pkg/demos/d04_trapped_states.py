"""
Hunting trapped states
======================

A trapped state solves the cut problem with no incoming wave.  The smallest
singular value of the cut system dips to zero there; each dip is bracketed,
polished and certified.
"""
import numpy as np

from qgtube import build_cut, make_wrapping
from qgtube.boundary import named_bc, random_cayley_bc, unitary_mapping
from qgtube.scan import find_bound_states
from qgtube.scattering import system_at

spec = make_wrapping(1, 2)
cut = build_cut(spec)
rng = np.random.default_rng(11)

# a generic U has nothing trapped in the pass band
bc = random_cayley_bc(cut.size, rng)
print("random U, pass band:", len(find_bound_states(spec, cut, bc, (0.2, 2.1), n_grid=60)), "states")

# in the stop band every solution decays, and trapped states are common
for c in find_bound_states(spec, cut, bc, (2.2, 3.1), n_grid=80):
    print(f"stop band: k={c.k:.10f} sigma={c.sigma_min:.1e} |tau|max={c.max_abs_tau:.3f}")

# design U so the bare auxiliary sine at k = 1.9 is admissible: an embedded state
X = system_at(spec, 1.9, named_bc("neumann", cut.size), cut).aux_traces[0]
designed = unitary_mapping(X.F + 1j * X.Fp, X.F - 1j * X.Fp, rng)
for c in find_bound_states(spec, cut, designed, (1.8, 2.0), n_grid=40):
    print(f"designed: k={c.k:.12f} embedded={c.embedded} channels open={c.n_propagating} "
          f"C={np.round(c.C, 4)}")
