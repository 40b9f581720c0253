"""Tropical optimisation: linear inequalities and ``x^- A x`` minimisation
over idempotent semifields, with a project-scheduling front end."""
from .ineq import Infeasible, SolutionSet, UnboundedBelow, minimal_solution, sample, solve_inequality, verify_inequality
from .linalg import (
    Mat,
    NormalForm,
    conjugate,
    is_irreducible,
    is_regular,
    mat_add,
    mat_mul,
    mat_pow,
    normal_form,
    scalar_mul,
    spectral_radius,
    star,
    tr_sum,
    trace,
)
from .optimizer import (
    Degenerate,
    OptProblem,
    OptResult,
    brute_force_min,
    compute_theta,
    minimize,
    minimize_linear_constrained,
    minimize_lower_bounded,
    minimize_unconstrained,
    objective,
)
from .scheduling import ProjectSpec, ScheduleResult, build_matrices, schedule, validate_schedule
from .semifield import DomainError, Scalar, Semifield, SemifieldMismatch

__version__ = "0.1.0"
