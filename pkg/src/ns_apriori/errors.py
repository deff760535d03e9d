"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the range where the operation is defined."""


class InvalidFieldError(ValueError):
    """A field carries non-finite values or mismatched grids."""


class UnsupportedOrderError(ValueError):
    """A derivative of total order above two was requested."""


class UndefinedRatioError(ValueError):
    """A ratio was requested for an identically zero field."""


class PreconditionError(ValueError):
    pass


class InvalidFamilyError(PreconditionError):
    """A test-function family violates its construction constraints."""


class InconsistencyError(RuntimeError):
    pass


class LinearSolverStall(RuntimeError):
    """The linear Stokes iteration hit its cap before reaching tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (final residual {residual:.3e})")
        self.residual = residual


class NonlinearDivergence(RuntimeError):
    """Picard iteration blew up or ran out of iterations."""

    def __init__(self, message, trace=None):
        super().__init__(
            f"{message}; try a smaller forcing amplitude or a larger viscosity"
        )
        self.trace = trace or []
