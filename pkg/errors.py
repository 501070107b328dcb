"""
coxfix
======
Exception hierarchy shared by every module.
"""

from typing import Any, Optional


class CoxfixError(Exception):
    """Base class for all library errors."""


class InputError(CoxfixError, ValueError):
    """Invalid letter, automorphism or mixed-system input."""


class ParseError(InputError):
    """Malformed Coxeter matrix file or catalog name."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(CoxfixError):
    """A configured cap (ball nodes, faces, radius) was exceeded."""


class InfiniteParabolicError(ResourceError):
    """W_J is infinite, or larger than the node cap allows us to decide."""


class EmptyIntervalError(CoxfixError):
    """Requested interval [u, v] with u not below v."""


class PreconditionError(CoxfixError):
    """Operation precondition failed; `witness` holds the offending data."""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class UnsupportedTypeError(CoxfixError):
    """No catalog type matches the requested exponent data."""


class InternalError(CoxfixError):
    """Computation contradicts theory. Indicates a bug in the core."""
