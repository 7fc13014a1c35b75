"""Exception types shared across the package."""


class MnmError(Exception):
    """Base class for all package-specific errors."""


class ModelSyntaxError(MnmError):
    """Raised by the model parser on malformed input."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownModelError(MnmError):
    """Requested builtin model name is not in the catalog."""


class DomainError(MnmError):
    """Evaluation left the holomorphy domain of a residual.

    kind is one of "div_by_zero", "log_of_zero", "non_finite".
    """

    def __init__(self, kind: str, node: str = "", pos=None):
        at = f" at {node}" if node else ""
        where = f" (line {pos[0]}, column {pos[1]})" if pos else ""
        super().__init__(f"domain error: {kind}{at}{where}")
        self.kind = kind
        self.node = node
        self.pos = pos


class NotPositiveDefiniteError(MnmError):
    """Cholesky factorization hit a non-positive pivot."""

    def __init__(self, pivot_index: int, pivot_value: float):
        super().__init__(
            f"matrix is not positive definite: pivot {pivot_value:.3e} at index {pivot_index}"
        )
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value


class SingularHessianError(MnmError):
    """A Newton-type step could not be computed because the Hessian is singular."""


class NotStationaryError(MnmError):
    """A critical-point report was requested at a point with a large gradient."""

    def __init__(self, grad_norm: float, tol: float):
        super().__init__(
            f"point is not stationary: gradient norm {grad_norm:.3e} exceeds tolerance {tol:.3e}"
        )
        self.grad_norm = grad_norm
        self.tol = tol


class NonRationalModelError(MnmError):
    """An operation requiring a rational residual got exp/log nodes."""
