"""Exception taxonomy shared by the whole package.

Every error raised by the library is an ``ArrowsError``; the subclasses map
one-to-one onto the distinct failure codes surfaced by the CLI and the play
service (invalid input vs. illegal move vs. resource limit).
"""

from __future__ import annotations


class ArrowsError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(ArrowsError, ValueError):
    """A parameter is outside the operation's documented domain."""


class InvalidGraphError(ArrowsError, ValueError):
    """The graph is unusable for the requested operation (e.g. isolated vertices)."""


class InvalidStateError(ArrowsError, ValueError):
    """The decoration violates the state rules of the selected game."""


class OccupiedEdgeError(ArrowsError):
    """The targeted edge already carries an arrow."""


class IllegalMoveError(ArrowsError):
    """The move would create a forbidden sink or source."""

    def __init__(self, message: str, vertex: int | None = None, kind: str | None = None):
        super().__init__(message)
        self.vertex = vertex
        self.kind = kind  # "sink" or "source"


class ResourceLimitError(ArrowsError):
    """The position exceeds the configured search bound."""


class FormatError(InvalidParameterError):
    """A graph/state text file failed to parse; carries the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
