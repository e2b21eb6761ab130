"""Maximum entropy states under a mean constraint.

Two routes to the same answer: the globally convergent fixed-point iteration
for the Lagrange multiplier (:mod:`.lagrange`), and the least fixed point of
a Scott-continuous map in the Bayesian order (:mod:`.order`).
"""
from ._backend import BACKEND
from .equilibrium import EquilibriumResult, equilibrium_state, free_energy, log_partition
from .errors import (
    DimensionError,
    DomainError,
    InvalidInputError,
    MaxEntError,
    NoSolutionError,
    NonConvergenceError,
    OracleError,
    SizeError,
)
from .lagrange import (
    MaxEntProblem,
    MaxEntResult,
    SolverConfig,
    SolveTrace,
    if_step,
    maxent_state,
    residual,
    residual_derivative,
    solve,
    solve_newton,
)
from .order import (
    OrderVerdict,
    PhiChain,
    lambda_functional,
    leq_projective,
    leq_symmetric,
    phi,
    phi_chain,
)
from .state import (
    ClassicalState,
    Observable,
    bottom,
    entropy,
    expectation,
    project,
    pure,
    sort_desc,
)

__version__ = "0.1.0"
