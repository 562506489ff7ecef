"""
Exception hierarchy shared by every hyperdel module.
"""


class HyperdelError(Exception):
    """Base class for all library errors."""


class ShapeError(HyperdelError, ValueError):
    """Shape, axis or slice mismatch, or an edit on an empty axis."""


class EditRangeError(HyperdelError, ValueError):
    """Axis or position out of range, or an edit vector infeasible for a shape."""


class AlphabetError(HyperdelError, ValueError):
    """Symbol outside the alphabet, or an alphabet that is not the declared power."""


class PreconditionError(HyperdelError, ValueError):
    """A witness constructor was called with inputs that violate its precondition."""


class VerificationFailure(HyperdelError):
    """A constructor found no witness or two cross-checked computations diverged."""


class BudgetExceeded(HyperdelError):
    """An exhaustive run would exceed its budget and sampling was not requested."""


class ArrayFormatError(HyperdelError, ValueError):
    """An array file could not be parsed."""
