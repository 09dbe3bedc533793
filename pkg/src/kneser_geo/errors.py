"""Exception hierarchy shared by every module of the package."""


class KneserError(Exception):
    """Base class for all errors raised by kneser_geo."""


class InputError(KneserError, ValueError):
    """Malformed or out-of-range input."""


class CapacityError(KneserError):
    """The requested computation exceeds a configured size cap."""


class PreconditionError(KneserError):
    """Inputs are valid but the operation's precondition does not hold."""


class BudgetError(KneserError):
    """An iterative solver ran out of evaluations before reaching tolerance."""
