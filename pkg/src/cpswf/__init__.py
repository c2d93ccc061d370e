"""Clifford prolate spheroidal wave functions on the unit disk.

Subpackages/modules:
    algebra     Clifford algebra arithmetic (blades, multivectors, fields)
    special     Jacobi / Bessel / quadrature primitives
    monogenics  planar spherical monogenics and ball polynomials
    hankel      radial eigenproblem, eigenvalue relations and bounds
    expansion   disk expansions (prolate basis and Fourier-Bessel baseline)
    cli         command-line driver
"""

from .algebra import (
    Blade,
    Multivector,
    basis_blade,
    basis_vector,
    blade_product,
    conjugate,
    from_vector,
    geometric_product,
    grade_project,
    inner_product,
    scalar_mv,
)
from .special import (
    QuadratureRule,
    bessel_j,
    bessel_j_zero,
    gauss_legendre,
    jacobi_deriv,
    jacobi_eval,
)
from .monogenics import (
    CliffordLegendre,
    clifford_legendre_eval,
    dirac_numeric,
    gram_matrix,
    monogenic_eval,
    monogenic_space_dim,
)
from .hankel import (
    BoundsReport,
    CPSWFEigenvalues,
    HankelOperator,
    RadialEigensystem,
    assemble_nystrom,
    check_bounds,
    check_bounds_with_convention_retest,
    chi_reference_c0,
    chi_spectrum,
    cpswf_radial_system,
    cross_check_finite_fourier,
    full_cpswf_eval,
    gamma_to_mu,
    hankel_eigs,
    radial_cpswf_eval,
)
from .expansion import (
    ApproximationReport,
    CpswfBasis,
    DiskFunction,
    ExpansionCoefficients,
    FourierBesselBasis,
    cpswf_expand,
    cpswf_reconstruct,
    disk_inner_product,
    fourier_bessel_expand,
    fourier_transform_check,
    l2_error,
    l2_norm,
    make_grid,
    plane_wave,
    reconstruct,
    select_terms,
    sup_norm_ratio,
    truncation_bound,
)

__version__ = "0.1.0"
