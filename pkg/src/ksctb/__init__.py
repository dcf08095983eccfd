"""Trigonometric cubic B-spline collocation solver for the 1-D
Kuramoto-Sivashinsky equation."""

from .basis import (
    KnotConstants,
    UniformGrid,
    eval_basis,
    eval_basis_derivative,
    eval_basis_recursive,
    knot_constants,
    nodal_values,
)
from .banded import (
    BandedFactorization,
    BandedMatrix,
    SingularMatrixError,
    dense_solve_oracle,
    lu_factor,
    solve,
)
from .scheme import (
    BoundaryData,
    Coefficients,
    KsProblem,
    RowCoefficients,
    assemble_A,
    assemble_B,
    boundary_rhs,
    eliminate_ghosts,
    recover_ghosts,
    row_coefficients,
)
from .stepper import (
    FitError,
    SolverBlowUpError,
    SolverState,
    Trajectory,
    fd_second_derivative,
    fit_initial,
    run,
    step,
)
from .cases import (
    CaseDefinition,
    QUINTIC_GRE_CASE_A,
    REFERENCE_GRE_CASE_A,
    ShockParams,
    case_a,
    case_b,
    case_c,
    exact_shock,
    gre,
)

__version__ = "0.1.0"
