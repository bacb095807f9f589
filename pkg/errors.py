"""Exception hierarchy shared by the lab modules.

Every error carries the process exit code the CLI maps it to, so handlers
can simply let exceptions propagate to the middleware in ``main.py``.
"""


class LabError(Exception):
    """Base class for all lab errors"""
    exit_code = 1


class DomainError(LabError, ValueError):
    """Input lies outside the domain an operation is defined on"""
    exit_code = 2


class GridSizeError(LabError, ValueError):
    exit_code = 2


class StepError(LabError, ValueError):
    """Finite-difference stencil would reach the singularity"""
    exit_code = 2


class ParameterError(LabError, ValueError):
    exit_code = 2


class UnknownEntryError(LabError, KeyError):
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class EvaluationError(LabError, ArithmeticError):
    """A density or field could not be evaluated (underflow, non-finite, critical point)"""
    exit_code = 2


class SpanTooSmallError(LabError, ValueError):
    exit_code = 2


class BranchMismatchError(LabError, ValueError):
    exit_code = 2


class HolderExponentError(LabError, ValueError):
    exit_code = 2


class NonConvergenceError(LabError, RuntimeError):
    exit_code = 3


class NewtonDivergenceError(NonConvergenceError):
    exit_code = 3


class BracketViolationError(LabError, RuntimeError):
    """Monotone iteration left the sub/supersolution bracket"""
    exit_code = 3


class QuadratureBudgetError(LabError, RuntimeError):
    exit_code = 3
