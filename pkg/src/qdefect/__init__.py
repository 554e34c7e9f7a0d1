"""Point-defect profiles of 2D nematic liquid crystals (Landau-de Gennes).

The package computes, verifies and renders index-k/2 defect profiles on a
disk: exact Q-tensor algebra, minimisation of the reduced radial energy of
the two-mode ansatz, the closed-form harmonic-map limit solutions, full 2D
energy/residual/stability checks, and an SVG renderer behind the
``qdefect`` command-line tool.
"""

from .errors import (
    ConstraintViolated,
    CsvFormatError,
    DecompositionInvalid,
    GridError,
    InvalidBranch,
    InvalidParams,
    NonConvergence,
    OddKForUniaxial,
    QDefectError,
)
from .field import (
    Field2D,
    EnergyGapResult,
    SecondVariationResult,
    dirichlet_quadrature,
    el_residual_2d,
    energy_gap,
    ldg_energy_2d,
    ldg_energy_spectral,
    lift,
    random_perturbation,
    second_variation,
    write_field_csv,
)
from .grid import PolarGrid, RadialGrid
from .harmonic import (
    Branch,
    DirichletEnergy,
    E0Result,
    PsiProfile,
    closed_form_dirichlet,
    dirichlet_energy_2d,
    e0_energy,
    explicit_profile,
    first_integral_defect,
    hm_residual,
    meromorphic_harmonic_map,
    profile_from_psi,
    psi_of_branch,
    sphere_map_tension_residual,
    uniaxial_escape_components,
    uniaxial_escape_field,
)
from .params import ModelParams, equilibrium_order_parameter
from .reduced import (
    OdeResidual,
    Profile,
    SolveReport,
    apply_boundary,
    continuation_in_b2,
    gradient_norm,
    minimize,
    ode_residual,
    read_profile_csv,
    reduced_energy,
    reduced_gradient,
    write_profile_csv,
)
from .render import RenderSpec, eigenvalue_chart_svg, glyph_svg
from .tensor import (
    FrameCoeffs,
    QTensor,
    ansatz_components,
    ansatz_eigenvalues,
    biaxiality,
    boundary_tensor,
    bulk_energy,
    eigen3,
    frame_f3,
    frame_fn,
)

__version__ = "0.1.0"
