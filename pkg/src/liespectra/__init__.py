"""Spectra and spectral radii of finite-dimensional matrix Lie algebras."""

from .generators import (
    heisenberg_fixture,
    nilpotent_family,
    random_commuting_tuple,
    random_nilpotent_algebra,
    solvable_example,
)
from .koszul import (
    boundary_matrix,
    homology_dimensions,
    is_in_spectrum,
    project_spectrum,
    spectrum,
)
from .lie import (
    LiePresentation,
    jordan_holder_basis,
    lower_central_series,
    verify_jordan_holder,
    verify_subalgebra,
)
from .linalg import Tolerances, exact_matrix, float_matrix
from .radius import (
    algebraic_radius_estimate,
    geometric_radius,
    spectrum_max_radius,
    tuple_power_norm,
    verify_main_theorem,
)
from .scalars import GaussianRational, gq
from .weights import joint_point_spectrum, triangularizing_basis, weight_decomposition

__all__ = [
    "GaussianRational", "gq", "Tolerances", "exact_matrix", "float_matrix",
    "LiePresentation", "verify_subalgebra", "verify_jordan_holder", "jordan_holder_basis",
    "lower_central_series", "weight_decomposition", "triangularizing_basis", "joint_point_spectrum",
    "boundary_matrix", "homology_dimensions", "is_in_spectrum", "spectrum", "project_spectrum",
    "tuple_power_norm", "algebraic_radius_estimate", "geometric_radius", "spectrum_max_radius",
    "verify_main_theorem", "solvable_example", "heisenberg_fixture", "random_commuting_tuple",
    "random_nilpotent_algebra", "nilpotent_family",
]
