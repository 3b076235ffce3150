"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import Any


class TambaraError(Exception):
    """Base class for every error raised by this package."""


class GroupValidationError(TambaraError, ValueError):
    """A multiplication table failed the group axioms."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class GSetValidationError(TambaraError, ValueError):
    """An action table or a point map is not a valid G-set / G-map."""


class ResourceBoundError(TambaraError):
    """A configured size bound was exceeded."""


class ParseError(TambaraError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.source = source


class ShapeError(TambaraError, ValueError):
    """Inputs do not have the shape an operation needs (endpoints, induced targets...)."""


class EndpointMismatchError(ShapeError):
    pass


class ExponentEscapeError(TambaraError):
    """A rewritten exponent left the exponent predicate during composition."""

    def __init__(self, message: str, diagram: Any = None):
        super().__init__(message)
        self.diagram = diagram


class NormUnavailableError(TambaraError):
    """A norm was requested along a map that is not admissible for the model."""

    def __init__(self, message: str, pair: Any = None):
        super().__init__(message)
        self.pair = pair


class InvalidSubcategoryError(TambaraError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness
