"""Tensor parameters, multiaxial decompositions, and coherent-state
weight functions for spin-j density matrices.

All matrices use the ladder basis ordered m = +j, ..., -j.  Spins are
half-integers carried as :class:`HalfInt`; every public entry point
accepts plain ints (and strings like "3/2" where noted) as well.
"""

from .angular import (
    MAX_DOUBLED_J,
    ExactCoefficient,
    cg,
    cg_value,
    spherical_harmonic,
    wigner_D,
    wigner_D_matrix,
    wigner_d,
    wigner_d_matrix,
)
from .axes import (
    Axis,
    MarDecomposition,
    RankDecomposition,
    axes_to_tensor,
    collinearity_check,
    extract_mar,
    fit_radius,
    mar_polynomial,
    polynomial_roots,
    roots_to_axes,
)
from .errors import (
    ConsistencyError,
    DomainError,
    NonClassicalWarning,
    NonPhysicalWarning,
    SpinAxesError,
    ValidationError,
)
from .halfint import HalfInt, dimension, halfint, m_range
from .pfunc import (
    QuadratureGrid,
    SphericalExpansion,
    coherent_state,
    default_grid,
    expansion_from_function,
    multipole_scale,
    rho_from_distribution,
    t_from_distribution,
    ylm_squared_t,
)
from .symmetric import (
    MAX_QUBITS,
    BlochVector,
    SeparableEnsemble,
    ensemble_to_rho,
    product_state_in_jm,
    purity,
    qubit_density,
    symmetric_subspace_unitary,
    symmetrize_pair,
)
from .tensors import (
    SpinDensityMatrix,
    TensorParams,
    maximally_mixed,
    rho_to_t,
    rotate_t,
    t_to_rho,
    tau_operator,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_DOUBLED_J",
    "MAX_QUBITS",
    "Axis",
    "BlochVector",
    "ConsistencyError",
    "DomainError",
    "ExactCoefficient",
    "HalfInt",
    "MarDecomposition",
    "NonClassicalWarning",
    "NonPhysicalWarning",
    "QuadratureGrid",
    "RankDecomposition",
    "SeparableEnsemble",
    "SpinAxesError",
    "SphericalExpansion",
    "SpinDensityMatrix",
    "TensorParams",
    "ValidationError",
    "axes_to_tensor",
    "cg",
    "cg_value",
    "coherent_state",
    "collinearity_check",
    "default_grid",
    "dimension",
    "ensemble_to_rho",
    "expansion_from_function",
    "extract_mar",
    "fit_radius",
    "halfint",
    "m_range",
    "mar_polynomial",
    "maximally_mixed",
    "multipole_scale",
    "polynomial_roots",
    "product_state_in_jm",
    "purity",
    "qubit_density",
    "rho_from_distribution",
    "rho_to_t",
    "roots_to_axes",
    "rotate_t",
    "spherical_harmonic",
    "symmetric_subspace_unitary",
    "symmetrize_pair",
    "t_from_distribution",
    "t_to_rho",
    "tau_operator",
    "wigner_D",
    "wigner_D_matrix",
    "wigner_d",
    "wigner_d_matrix",
    "ylm_squared_t",
]
