"""Exact power-law solutions of nonlinear fractional equations (order 1 < alpha < 2)
on metric star graphs with weighted-continuity and Kirchhoff vertex conditions.
"""

from fracstar.closed_form import (
    PowerSolution,
    amplitude_forced,
    amplitude_homogeneous,
    build_solution,
    build_solutions,
    frac_derivative_of_solution,
    treq_residual,
)
from fracstar.errors import (
    BranchError,
    CompatibilityError,
    DegenerateError,
    DomainError,
    FracStarError,
    NoRootError,
    ParseError,
    PoleError,
)
from fracstar.frac_ops import (
    GridSpec,
    Monomial,
    gl_weights,
    power_derivative,
    power_integral,
    rl_derivative_numeric,
    rl_integral_numeric,
)
from fracstar.model import (
    BondSpec,
    Kind,
    Severity,
    StarGraphProblem,
    Violation,
    gamma_star,
    solution_exponent,
    validate,
)
from fracstar.problem_file import emit_problem_file, parse_problem_file
from fracstar.specfun import gamma, gamma_ratio, log_gamma
from fracstar.verify import convergence_order, left_end_conditions, ode_residual
from fracstar.vertex import (
    VertexResiduals,
    continuity_values,
    kirchhoff_terms,
    solve_lambdas_homogeneous,
    solve_lengths_homogeneous,
    solve_vertex_forced,
    vertex_residuals,
)

__version__ = "0.1.0"
