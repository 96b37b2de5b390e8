"""
brouwerlab exceptions
Unified error codes and exit codes for library and CLI
"""
from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class BrouwerLabException(Exception):
    """Base class for every error raised by brouwerlab"""

    def __init__(
        self,
        message: str,
        code: str = "INTERNAL_ERROR",
        exit_code: int = EXIT_INTERNAL,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.code = code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


# Graph input
class GraphValidationError(BrouwerLabException):
    """Graph input rejected"""

    def __init__(self, message: str, code: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, code=code, exit_code=EXIT_USAGE, details=details)


class VertexOutOfRangeError(GraphValidationError):
    def __init__(self, u: int, v: int, n: int):
        super().__init__(
            message=f"edge ({u}, {v}) has a vertex outside [0, {n})",
            code="VERTEX_OUT_OF_RANGE",
            details={"u": u, "v": v, "n": n},
        )


class NonIntegerVertexError(GraphValidationError):
    def __init__(self, index: Any):
        super().__init__(
            message=f"vertex index {index!r} is not an integer",
            code="NON_INTEGER_VERTEX",
            details={"index": repr(index)},
        )


class SelfLoopError(GraphValidationError):
    def __init__(self, u: int):
        super().__init__(
            message=f"loop at vertex {u} is not allowed",
            code="SELF_LOOP",
            details={"u": u},
        )


class DuplicateEdgeError(GraphValidationError):
    def __init__(self, u: int, v: int):
        super().__init__(
            message=f"edge ({u}, {v}) given more than once",
            code="DUPLICATE_EDGE",
            details={"u": u, "v": v},
        )


class NonFiniteWeightError(GraphValidationError):
    def __init__(self, u: int, v: int, weight: float):
        super().__init__(
            message=f"edge ({u}, {v}) has non-finite weight {weight!r}",
            code="NON_FINITE_WEIGHT",
            details={"u": u, "v": v, "weight": repr(weight)},
        )


class UnknownGraphKindError(GraphValidationError):
    def __init__(self, kind: str):
        super().__init__(
            message=f"unknown graph kind: {kind}",
            code="UNKNOWN_GRAPH_KIND",
            details={"kind": kind},
        )


class GraphParseError(GraphValidationError):
    def __init__(self, message: str, source: Optional[str] = None):
        super().__init__(
            message=f"cannot parse graph: {message}",
            code="GRAPH_PARSE_ERROR",
            details={"source": source} if source else {},
        )


# Numerics
class EigenSolverError(BrouwerLabException):
    """Symmetric QR iteration did not converge"""

    def __init__(self, n: int, block: tuple, sweeps: int):
        super().__init__(
            message=f"QR iteration did not converge on block {block} after {sweeps} sweeps (n={n})",
            code="EIGENSOLVER_NON_CONVERGENCE",
            exit_code=EXIT_INTERNAL,
            details={"n": n, "block": list(block), "sweeps": sweeps},
        )


class TraceMismatchError(BrouwerLabException):
    """Eigenvalue sum disagrees with the matrix trace"""

    def __init__(self, n: int, trace: float, total: float, tol: float):
        super().__init__(
            message=f"eigenvalue sum {total!r} differs from trace {trace!r} by more than {tol!r} (n={n})",
            code="TRACE_MISMATCH",
            exit_code=EXIT_INTERNAL,
            details={"n": n, "trace": trace, "sum": total, "tolerance": tol},
        )


# Parameters
class ParameterError(BrouwerLabException):
    """Precondition violated"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(
            message=message,
            code="INVALID_PARAMETER",
            exit_code=EXIT_USAGE,
            details={"field": field} if field else {},
        )


class HypothesisViolationError(BrouwerLabException):
    """A lemma hypothesis does not hold for the given parameters"""

    def __init__(self, message: str, hypothesis: str):
        super().__init__(
            message=message,
            code="HYPOTHESIS_VIOLATION",
            exit_code=EXIT_USAGE,
            details={"hypothesis": hypothesis},
        )


class BoundNotValidError(BrouwerLabException):
    """Analytic bound requested below its validity threshold"""

    def __init__(self, n: int, n0: Optional[int] = None, reason: Optional[str] = None):
        if reason is None:
            reason = f"n={n} is below n0={n0}"
        super().__init__(
            message=f"bound not yet valid: {reason}",
            code="BOUND_NOT_YET_VALID",
            exit_code=EXIT_USAGE,
            details={"n": n, "n0": n0},
        )


# Runs
class EnumerationCapError(BrouwerLabException):
    def __init__(self, n: int, cap: int):
        super().__init__(
            message=f"exhaustive enumeration capped at n={cap}, got n={n}",
            code="ENUMERATION_CAP_EXCEEDED",
            exit_code=EXIT_USAGE,
            details={"n": n, "cap": cap},
        )


class CheckpointError(BrouwerLabException):
    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(
            message=message,
            code="CHECKPOINT_ERROR",
            exit_code=EXIT_USAGE,
            details={"path": path} if path else {},
        )


class ConfigurationError(BrouwerLabException):
    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(
            message=message,
            code="CONFIGURATION_ERROR",
            exit_code=EXIT_USAGE,
            details={"path": path} if path else {},
        )
