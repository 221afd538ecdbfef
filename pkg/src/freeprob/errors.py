"""Exception hierarchy shared by every freeprob module.

The split mirrors how callers are expected to react: StructuralError and
ValidationError mean the caller handed us a malformed or out-of-contract
object, DomainError means the operation is undefined for mathematically
valid arguments, CapacityError means a size cap was hit, ParseError means
text or a file could not be read.
"""


class FreeprobError(Exception):
    """Base class for all errors raised by freeprob."""


class StructuralError(FreeprobError):
    """A composite object is malformed: not a partition of {1..n},
    mismatched ground sets, colliding alphabets, a non-symmetric matrix."""


class ValidationError(FreeprobError):
    """A parameter is outside its allowed range or a stated precondition
    fails (negative rate, order too small, missing table entry)."""


class DomainError(FreeprobError):
    """The operation is undefined for these arguments, e.g. the Mobius
    function on an incomparable pair."""


class CapacityError(FreeprobError):
    """A hard size cap was exceeded (enumeration order, truncated Fock
    dimension)."""


class ParseError(FreeprobError):
    """Input text or a data file could not be parsed."""
