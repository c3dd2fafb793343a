"""
Floquet bands of a square-lattice tube
======================================

Every Floquet pair (z1, z2) of a wrapped lattice comes from one Laurent
polynomial root z.  Walking k across (0, pi) shows channels opening and
closing.
"""
import numpy as np

from qgtube import make_wrapping
from qgtube.dispersion import all_modes, axis_multiplier

spec = make_wrapping(1, 2)

# one row per k: how many channels propagate, and the slowest evanescent decay
for k in np.linspace(0.2, 3.0, 15):
    ms = all_modes(spec, k)
    taus = sorted(abs(axis_multiplier(m)) for m in ms if m.direction.is_response)
    print(f"k={k:5.2f}  channels={ms.n_propagating_channels}  "
          f"|tau| responses={np.round(taus, 3)}  band_edge={ms.band_edge}")

# pi/2 is a band edge for (1,2): z = -1 is a double root on the unit circle
edge = all_modes(spec, np.pi / 2)
print("\nat k = pi/2:", sorted((complex(np.round(m.z, 6)) for m in edge), key=np.angle))

# with w = z + 1/z the roots solve w^2 + w - 2 = 4 cos k; the two w merge at
# cos k = -9/16 and turn complex, leaving no z on the unit circle
print("top of the pass band:", np.arccos(-9 / 16))

# wraps with a common factor split into sectors that never share a pair
wide = all_modes(make_wrapping(3, 6), 1.0)
print("\n(3,6): sectors", sorted({m.ell for m in wide}), "min distance", wide.min_sector_distance)
