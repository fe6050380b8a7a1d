"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class RDCError(Exception):
    """Base class for every error raised by :mod:`rdcexact`."""


class DomainError(RDCError, ValueError):
    """A quantity left the domain where a formula is defined.

    ``value`` holds the offending number (the smallest one when arrays are
    involved) and ``where`` names the bracket, argument or node responsible.
    """

    def __init__(self, message: str, value: float | None = None, where: str | None = None):
        super().__init__(message)
        self.value = value
        self.where = where


class EvaluationError(RDCError, ArithmeticError):
    """A residual or formula produced NaN/Inf."""

    def __init__(self, message: str, t: float | None = None, x: float | None = None):
        super().__init__(message)
        self.t = t
        self.x = x


class ConstraintError(RDCError, ValueError):
    """Equation parameters are inconsistent with the requested solution family."""


class UsageError(RDCError, ValueError):
    """An operation was called outside its contract (wrong variant, zero scale...)."""


class SolverAbort(RDCError, RuntimeError):
    """The method-of-lines integrator gave up."""


class StabilityError(SolverAbort):
    pass


class PositivityError(SolverAbort):
    def __init__(self, message: str, node: int, time: float):
        super().__init__(message)
        self.node = node
        self.time = time
