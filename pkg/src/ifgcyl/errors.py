"""Exception types shared across the package."""


class IFGError(Exception):
    """Base class for every error raised by ifgcyl."""


class FormulaSyntaxError(IFGError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class WellFormednessError(IFGError):
    """A formula, team or valuation does not fit its ambient dimensions."""


class StructureError(IFGError):
    """Bad structure file, unknown relation symbol or arity mismatch."""


class BudgetExceeded(IFGError):
    """An enumeration or search would exceed its configured limit."""


class InvariantViolation(IFGError):
    """A property guaranteed by the theory failed to hold at runtime."""
