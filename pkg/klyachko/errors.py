# klyachko/errors.py
"""
Exception types shared by every layer.
Status-like outcomes (LP status, slack status, compatibility) are values,
these are for conditions a caller cannot continue from.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

# CLI exit codes
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_BUG = 3


class KlyachkoError(Exception):
    """Base class for all toolkit errors"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {"type": type(self).__name__, "message": self.message, **self.context}


class DimensionMismatchError(KlyachkoError):
    "Raised when two operands live in ambient spaces of different dimension."


class UnboundedPolytopeError(KlyachkoError):
    "Raised when an operation needs a bounded polytope and got an unbounded one."


class UnboundedSupportError(UnboundedPolytopeError):
    "Raised when the fan's rays do not positively span, so section supports are infinite."


class EmptyOperandError(KlyachkoError):
    "Raised when a Minkowski operand is empty."


class UnsupportedRankError(KlyachkoError):
    "Raised by checks that are only implemented up to lattice rank 3."


class NoConeFoundError(KlyachkoError):
    "Raised when no maximal cone contains a vector (invalid or incomplete fan)."


class ShapeMismatchError(KlyachkoError):
    "Raised when a coefficient matrix does not match the fan."


class FiltrationError(KlyachkoError):
    "Raised when filtration steps violate nesting or ordering."


class BudgetExceededError(KlyachkoError):
    "Raised when a symmetric power exceeds the configured dimension budget."


class LUnderestimatedError(KlyachkoError):
    "Raised when a generator polytope escapes the computed L(X,E)."


class WrongProvenanceError(KlyachkoError):
    "Raised when the split decision is requested for a non-split bundle."


class InvariantViolationError(KlyachkoError):
    "Raised when an internal consistency check fails (this is a bug)."


class IncompatibleBundleError(KlyachkoError):
    """Raised when one or more maximal cones admit no compatible grading"""

    def __init__(self, message: str, witnesses: List[Any]):
        super().__init__(message)
        self.witnesses = list(witnesses)

    @property
    def witness(self) -> Any:
        return self.witnesses[0]

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["witness"] = self.witness.to_dict()
        data["witnesses"] = [w.to_dict() for w in self.witnesses]
        return data


@dataclass(frozen=True)
class Diagnostic:
    """One positioned problem found while loading a model file"""
    path: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    detail: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"path": self.path, "message": self.message}
        if self.line is not None:
            data["line"] = self.line
            data["column"] = self.column
        if self.detail is not None:
            data["detail"] = self.detail
        return data


class ModelInvalidError(KlyachkoError):
    """Raised when a model file fails parsing or validation"""

    def __init__(self, diagnostics: List[Diagnostic], **context: Any):
        super().__init__(f"{len(diagnostics)} problem(s) in model file", **context)
        self.diagnostics = diagnostics

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["diagnostics"] = [d.to_dict() for d in self.diagnostics]
        return data
