"""Exception types shared across the package."""

from __future__ import annotations


class SubtileError(Exception):
    """Base class for every error raised by this package."""


class BoundaryCountMismatch(SubtileError):
    """Number of time boundaries does not match the number of blocks."""


class NonMonotoneTimes(SubtileError):
    """Times violate ordering: a start after its end, or decreasing starts."""

    def __init__(self, message: str, cue: int | None = None):
        super().__init__(message)
        self.cue = cue


class SrtParseError(SubtileError):
    """Malformed SRT input."""

    def __init__(self, message: str, cue: int | None = None):
        super().__init__(message)
        self.cue = cue


class TimeParseError(SrtParseError):
    """Cue time line does not match ``HH:MM:SS,mmm --> HH:MM:SS,mmm``."""


class EmptyCueError(SrtParseError):
    """Cue carries an index and times but no text lines."""


class TimeRangeError(SubtileError):
    """Time exceeds the largest value an SRT clock can represent."""


class InfeasibleAlignment(SubtileError):
    """More tokens than frames: no monotone alignment exists."""


class NoBlocksError(SubtileError):
    """Token sequence yields no subtitle blocks."""


class EmptyDocumentError(SubtileError):
    """Operation requires at least one block."""


class UnknownTokenError(SubtileError):
    """A token is not present in the posterior vocabulary."""

    def __init__(self, token: str):
        super().__init__(f"token not in vocabulary: {token!r}")
        self.token = token


class PosteriorFormatError(SubtileError):
    """Posterior file is malformed, truncated, or of an unknown version."""
