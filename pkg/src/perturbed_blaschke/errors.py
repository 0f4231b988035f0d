"""Exception types raised by the library."""


class BlaschkeError(Exception):
    """Base class for all library errors."""


class DomainError(BlaschkeError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NoConvergenceError(BlaschkeError, ArithmeticError):
    """Newton refinement exhausted its budget or left its trust disk."""


class DegenerateInventoryError(BlaschkeError):
    """Two refined roots collided, so the inventory is not trustworthy."""


class SeedNotEscapedError(BlaschkeError, ValueError):
    """A component was requested for a pixel whose orbit did not escape."""


class PreconditionError(BlaschkeError):
    """The parameter pair does not satisfy an operation's precondition."""


class LabelingAmbiguityError(BlaschkeError):
    """Annular bands could not be separated at the requested resolution."""
