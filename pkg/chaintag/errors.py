"""
Exception hierarchy for chaintag.

Library code raises these; only the command-line entry point turns them
into diagnostics and exit codes.
"""

from typing import Optional


class ChainTagError(Exception):
    """Base class for every error raised by chaintag."""


class ShapeError(ChainTagError, ValueError):
    """Array dimensions do not agree."""


class ParseError(ChainTagError):
    """Malformed input file or string."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        where = ""
        if path is not None and line_number is not None:
            where = f"{path}:{line_number}: "
        elif line_number is not None:
            where = f"line {line_number}: "
        elif path is not None:
            where = f"{path}: "
        super().__init__(f"{where}{message}")


class TagFormatError(ParseError):
    """A label string has no B-/I- prefix and is not O."""


class AlignmentError(ChainTagError):
    """Precomputed embeddings do not line up with a corpus."""


class EmptySupportError(ChainTagError, ValueError):
    """A log-domain reduction over nothing but negative infinity."""


class CacheError(ChainTagError):
    """A backward pass was requested without a training-mode forward cache."""


class LabelSetMismatchError(ChainTagError):
    """A corpus uses labels that a model does not know."""


class InstanceTooLargeError(ChainTagError):
    """Exhaustive enumeration refused."""


class NonFiniteGradientError(ChainTagError):
    """A gradient entry is NaN or infinite."""

    def __init__(self, parameter: str):
        self.parameter = parameter
        super().__init__(f"non-finite gradient in parameter {parameter!r}")


class ConfigError(ChainTagError):
    """Invalid or unknown configuration."""


class CheckpointError(ChainTagError):
    """Unreadable or inconsistent checkpoint file."""


class EmptyCorpusError(ChainTagError):
    """An operation needs at least one sentence."""


__all__ = [
    "ChainTagError",
    "ShapeError",
    "ParseError",
    "TagFormatError",
    "AlignmentError",
    "EmptySupportError",
    "CacheError",
    "LabelSetMismatchError",
    "InstanceTooLargeError",
    "NonFiniteGradientError",
    "ConfigError",
    "CheckpointError",
    "EmptyCorpusError",
]
