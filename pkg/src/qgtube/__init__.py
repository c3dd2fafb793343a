"""Floquet spectra, unitary cut conditions and trapped states of square-lattice
quantum graph tubes."""
from .boundary import (
    UnitaryBC,
    admissibility_residual,
    admissible_trace,
    boundary_form,
    load_unitary,
    named_bc,
    random_cayley_bc,
    random_hermitian,
    unitary_from_hermitian,
    unitary_mapping,
)
from .core import (
    EdgeWave,
    FundamentalCoefficients,
    WrappingSpec,
    dispersion_lhs,
    eval_edge_wave,
    eval_edge_wave_deriv,
    fundamental_matrix,
    make_wrapping,
    null_coefficients,
)
from .dispersion import (
    Direction,
    FloquetMode,
    ModeSet,
    all_modes,
    axis_multiplier,
    classify_mode,
    laurent_coefficients,
    recover_z,
    simple_root_check,
    solve_modes,
)
from .geometry import CutGeometry, boundary_order, build_cut, find_anchors
from .oracle import build_finite_tube, oracle_compare
from .scan import certify, det_profile, find_bound_states, scan_bc_family
from .scattering import assemble_system, scattering_matrix, solve_scatter, system_at
from .traces import AuxMode, BoundaryTrace, aux_trace, mode_flux, mode_trace, vertex_residuals

__version__ = "0.1.0"
