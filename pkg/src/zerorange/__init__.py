"""Singular point interactions of the 1-D Schroedinger operator.

Boundary matrices of the four self-adjoint families, transfer-matrix
scattering on the line, ring spectra with flux splitting, and smoothed
(position-dependent-mass) realizations with boundary-matrix extraction.
"""

from .boundary import (
    BoundaryMatrix,
    ExtensionKind,
    FluxParam,
    MassRatio,
    balian_bc,
    boundary_matrix,
    custom_boundary_matrix,
    flux_to_x3,
    mass_ratio_to_x2,
    x1,
    x2,
    x2_to_mass_ratio,
    x2_x3_reparam,
    x3,
    x3_to_flux,
    x4,
)
from .circle import (
    CircleSpec,
    DegeneracyReport,
    SpectrumResult,
    SpectrumRoot,
    ZeemanLevel,
    circle_spectrum,
    closed_form_residual,
    degeneracy_report,
    secular_value,
    zeeman_levels,
)
from .errors import (
    InvalidInputError,
    InvalidProfileError,
    NumericalFailureError,
    SingularCoefficientError,
)
from .numerics import RealInterval, find_roots, propagate, quadrature, tridiag_eigs
from .regularized import (
    ConvergenceReport,
    EffPotentialSpec,
    MassProfile,
    RegularizedOperator,
    build_operator,
    convergence_study,
    discretize_and_eigs,
    effective_potential,
    eta_map,
    extract_bc,
    inverse_mass,
    v_eps,
    v_eps_prime,
    x4_recover,
)
from .scattering import (
    DefectChain,
    SMatrix,
    TransferMatrix,
    chain_from_spec,
    chain_transfer,
    free_propagator,
    load_chain,
    smatrix,
    transmission_curve,
)

__version__ = "0.1.0"
