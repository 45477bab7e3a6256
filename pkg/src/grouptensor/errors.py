"""Exception types shared across the package."""


class GroupTheoryError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(GroupTheoryError):
    """Invalid table, word, or parameter (out-of-range index, bad shape, ...)."""


class NotNormal(GroupTheoryError):
    """A quotient was requested by a subgroup that is not normal."""


class LimitExceeded(GroupTheoryError):
    """Coset enumeration hit its coset limit before completing.

    Signals that the instance exceeds desk scale; never silent truncation.
    """


class BoundExceeded(GroupTheoryError):
    """An operation was asked to run above its configured size bound."""


class IncompleteTable(GroupTheoryError):
    """A coset-table operation requires a complete table."""


class NotClosed(GroupTheoryError):
    """A computed element set failed subgroup closure; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ExtensionFailed(GroupTheoryError):
    """A map defined on generators failed to extend to a homomorphism."""


class ActionInconsistent(GroupTheoryError):
    """A constructed group action failed the action axioms (engine bug)."""


class SubgroupViolation(GroupTheoryError):
    """A set that must be a subgroup failed closure (engine bug)."""
