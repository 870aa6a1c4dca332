"""Exception types shared across the package."""


class GroundLatticeError(Exception):
    """Base class for all library errors."""


class InputError(GroundLatticeError):
    """Malformed input: bad JSON, dimension mismatch, unknown spec string."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{message} (field: {field})"
        super().__init__(message)


class PreconditionError(GroundLatticeError):
    """A documented operation precondition does not hold."""


class NonConvergenceError(GroundLatticeError):
    """Iterative solver hit its cap; carries the final residual."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class TrivialConeError(GroundLatticeError):
    """Requested a relative interior point of the zero cone."""


class UnsupportedConfigurationError(GroundLatticeError):
    """Operation not available for this engine/parameter combination."""


class IncompleteRaysError(GroundLatticeError):
    """Extreme-ray search found fewer independent rays than the cone dimension.

    The rays found so far are available as ``partial``.
    """

    def __init__(self, message, partial):
        self.partial = partial
        super().__init__(message)


class NodeBudgetError(GroundLatticeError):
    """Lattice closure exceeded the node budget; ``partial`` holds what was built."""

    def __init__(self, message, partial):
        self.partial = partial
        super().__init__(message)
