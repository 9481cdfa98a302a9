"""Painleve-I tritronquee solutions on straight lines in the complex plane.

A boundaryless multidomain Chebyshev collocation method: the two unbounded
pieces of the line are compactified by s = 1/sqrt(z) and solve for the
regularised remainder v = Omega - sigma*sqrt(z/3), the middle piece solves
the Painleve-I equation directly, and the domains are coupled through C^1
junction conditions injected by row replacement into a global Newton
iteration.
"""

__version__ = "0.1.0"

from .bvp_solver import (
    SolveReport,
    SolverConfig,
    SolveState,
    assemble,
    build_operators,
    evaluate_solution,
    initial_iterate,
    newton_solve,
)
from .chebyshev import (
    ChebCoeffs,
    ChebGrid,
    decay_diagnostic,
    eval_at,
    make_grid,
    to_coeffs,
    values_of,
)
from .complex_line import (
    SECTOR_HALF_ANGLE,
    DomainLayout,
    LineSpec,
    ValidationResult,
    s_of_l_end,
    sqrt_branch,
    validate_line,
    x_of_l_middle,
    z_of_x,
)
from .dense_linear import DenseMatrix, condition_estimate, lu_solve
from .errors import (
    BranchCutCrossed,
    SectorViolation,
    SingularJacobian,
    SingularMatrix,
    ZeroArgument,
)
from .painleve_model import (
    AsymptoticSeries,
    EndDomainOperator,
    MiddleDomainOperator,
    asymptotic_coefficients,
    asymptotic_eval,
    domega_dx_end,
    end_domain_operator,
    jacobian_end,
    jacobian_middle,
    middle_domain_operator,
    omega_from_v,
    residual_end,
    residual_middle,
)

__all__ = [
    "__version__",
    "AsymptoticSeries", "BranchCutCrossed", "ChebCoeffs", "ChebGrid",
    "DenseMatrix", "DomainLayout", "EndDomainOperator", "LineSpec",
    "MiddleDomainOperator", "SECTOR_HALF_ANGLE", "SectorViolation",
    "SingularJacobian", "SingularMatrix", "SolveReport", "SolveState",
    "SolverConfig", "ValidationResult", "ZeroArgument",
    "assemble", "asymptotic_coefficients", "asymptotic_eval",
    "build_operators", "condition_estimate", "decay_diagnostic",
    "domega_dx_end", "end_domain_operator", "eval_at", "evaluate_solution",
    "initial_iterate", "jacobian_end", "jacobian_middle", "lu_solve",
    "make_grid", "middle_domain_operator", "newton_solve", "omega_from_v",
    "residual_end", "residual_middle", "s_of_l_end", "sqrt_branch",
    "to_coeffs", "validate_line", "values_of", "x_of_l_middle", "z_of_x",
]
