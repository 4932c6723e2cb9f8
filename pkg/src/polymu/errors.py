"""Exception types shared across the package."""


class PolymuError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(PolymuError):
    """Malformed graph data or a violated graph invariant.

    The message names the offending field or element, e.g. "edges[3]".
    """


class FormulaError(PolymuError):
    """Ill-formed formula (arity, binding, positivity, signature)."""


class ParseError(FormulaError):
    """Syntax error in formula text.  Carries the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ResourceLimitError(PolymuError):
    """A configured size or step budget was exceeded."""


class CrossCheckError(PolymuError):
    """Two independent computations of the same value disagreed."""
