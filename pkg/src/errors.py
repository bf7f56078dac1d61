"""
Exception hierarchy shared by every toolkit module
"""

from typing import Any, Optional, Sequence


class VIToolkitError(Exception):
    """Base class for all toolkit errors"""


class DimensionError(VIToolkitError):
    """Operands have inconsistent dimensions"""


class GeometryError(VIToolkitError):
    """Invalid convex set, point or sampling request"""


class ConvergenceError(GeometryError):
    """An iterative geometric routine stopped before reaching its tolerance"""

    def __init__(self, message: str, bound: float, iterations: int):
        super().__init__(message)
        self.bound = bound
        self.iterations = iterations


class ExpressionError(VIToolkitError):
    """Base class for expression language errors"""


class ExpressionSyntaxError(ExpressionError):
    """Source text could not be parsed; position is 1-based"""

    def __init__(self, message: str, position: int, source: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.source = source


class ExpressionEvaluationError(ExpressionError):
    """Evaluation produced an undefined or non-finite value"""


class OperatorError(VIToolkitError):
    """A vector field could not be built or evaluated"""


class UnknownCatalogEntry(OperatorError):
    def __init__(self, name: str, available: Sequence[str]):
        super().__init__(f"Unknown catalog entry '{name}'. Available: {', '.join(sorted(available))}")
        self.name = name
        self.available = list(available)


class InstanceError(VIToolkitError):
    """Instance file is unreadable or violates the schema"""


class SolverError(VIToolkitError):
    """Base class for solver failures"""


class FieldEvaluationError(SolverError):
    """A field failed at a specific grid point"""

    def __init__(self, message: str, point: Optional[Any] = None):
        super().__init__(message)
        self.point = point


class RangeViolation(SolverError):
    """A self-map sends a grid point outside its domain"""

    def __init__(self, message: str, point: Any, image: Any):
        super().__init__(message)
        self.point = point
        self.image = image


class CheckerError(VIToolkitError):
    """Unknown property or invalid checker parameters"""
