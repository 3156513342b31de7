"""Low-energy spectral analysis of 3D Schrodinger operators with point interactions."""
from pointspec.config import Configuration, load, registry_get, save, validate
from pointspec.gamma import gamma_matrix, gamma_taylor, green_free, intersect_kernels, nullspace
from pointspec.kernels import BACKEND
from pointspec.laurent import (
    jn_invert,
    laurent_closed_form,
    laurent_contour,
    laurent_expansion,
    resolvent_coefficients,
    resolvent_kernel,
)
from pointspec.quadform import gamma2_form, projected_form_oracle, sphere_average_constant
from pointspec.search import maximize_zero_multiplicity, scan_real_axis, solve_alpha_for_kernel
from pointspec.spectrum import evaluate_bound_state, find_negative_eigenvalues, gram_inner
from pointspec.zero_modes import classify_zero_energy, verify_zero_eigenfunction, zero_mode_value

__version__ = "0.1.0"
