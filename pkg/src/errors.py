"""
Exception hierarchy for dgx

Mathematical failures (a square that is not cartesian, an axiom with a
counterexample) are reported as data. Exceptions are reserved for invalid
input and for questions the engine refuses to answer.
"""
from typing import Optional


class DgxError(Exception):
    """Base class for every dgx error"""


class FieldError(DgxError):
    """Invalid field specification"""


class FieldMismatchError(DgxError):
    """Operands live over different fields"""


class DimensionMismatchError(DgxError):
    """Shapes of matrices or vectors do not fit"""


class WindowError(DgxError):
    """A degree outside the computed window was requested"""

    def __init__(self, message: str, degree: Optional[int] = None):
        super().__init__(message)
        self.degree = degree


class PresentationError(DgxError):
    """Inconsistent dg quiver presentation"""


class InvalidComplexError(DgxError):
    """Differential does not square to zero or has the wrong shape"""


class InvalidMorphismError(DgxError):
    """Morphism is not closed, not a chain map, or has mismatched ends"""


class MaurerCartanError(DgxError):
    """Twisted complex datum violates dq + q^2 = 0"""


class BudgetExceededError(DgxError):
    """Enumeration would exceed the configured budget"""

    def __init__(self, message: str, estimate: int, budget: int):
        super().__init__(f"{message} (estimate {estimate} > budget {budget})")
        self.estimate = estimate
        self.budget = budget


class NotFoundAmongCandidatesError(DgxError):
    """A kernel, pullback or pushout was not found among the candidate objects"""


class WorkspaceError(DgxError):
    """Duplicate or unresolved names in a workspace"""


class ParseError(DgxError):
    """Lexical, syntactic or semantic error in a .dgx file"""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
