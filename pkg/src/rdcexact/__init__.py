"""Closed-form solutions of nonlinear reaction-diffusion-convection equations.

The package encodes a catalog of exact solutions, checks every formula by
substituting it into its PDE with second-order forward-mode differentiation
(:mod:`rdcexact.jet`), and cross-checks them against a method-of-lines
integrator (:mod:`rdcexact.evolver`).
"""

__version__ = "0.1.0"

from .catalog import (CATALOG, Family, SolutionInstance, bracket, derive_coefficients,
                      evaluate, list_catalog, select_branch, surface, validity, value)
from .cubic import CubicKind, CubicSolution, classify, solve_cubic
from .equations import (Convection, EquationSpec, Reaction, discriminant, normalized_residual,
                        residual)
from .errors import (ConstraintError, DomainError, EvaluationError, PositivityError, RDCError,
                     SolverAbort, StabilityError, UsageError)
from .jet import Jet2

__all__ = [
    "CATALOG", "Family", "SolutionInstance", "bracket", "derive_coefficients", "evaluate",
    "list_catalog", "select_branch", "surface", "validity", "value",
    "CubicKind", "CubicSolution", "classify", "solve_cubic",
    "Convection", "EquationSpec", "Reaction", "discriminant", "normalized_residual", "residual",
    "ConstraintError", "DomainError", "EvaluationError", "PositivityError", "RDCError",
    "SolverAbort", "StabilityError", "UsageError", "Jet2",
]
