"""
Structured errors shared by every component.

Each error carries the data needed to diagnose it and a stable process exit
code, so the command-line layer can map failures without string matching.
"""

from typing import Optional, Sequence


class SpanError(Exception):
    """Base class for all library errors."""

    exit_code: int = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ShapeMismatchError(SpanError):
    """Two operands do not conform for an operation."""

    exit_code = 2

    def __init__(self, op: str, left: Sequence[int], right: Sequence[int], detail: str = ""):
        self.op = op
        self.left = tuple(left)
        self.right = tuple(right)
        message = f"{op}: shape mismatch {self.left} vs {self.right}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class TapeError(SpanError):
    """Backward pass requested without a matching recorded forward pass."""

    exit_code = 3


class NonFiniteError(SpanError):
    """A NaN or Inf appeared where a finite value is required."""

    exit_code = 3

    def __init__(self, where: str, index: Optional[Sequence[int]] = None):
        self.where = where
        self.index = tuple(index) if index is not None else None
        message = f"non-finite value in {where}"
        if self.index is not None:
            message += f" at index {self.index}"
        super().__init__(message)


class ConfigError(SpanError):
    """Invalid configuration key or value."""

    exit_code = 2

    def __init__(self, key: str, message: str):
        self.key = key
        self.detail = message
        super().__init__(f"{key}: {message}")


class PlacementError(SpanError):
    """A manipulation region could not be placed inside the image."""

    exit_code = 3

    def __init__(self, kind: str, attempts: int):
        self.kind = kind
        self.attempts = attempts
        super().__init__(f"{kind}: region placement failed after {attempts} attempts")


class MetricError(SpanError):
    """Metric undefined for the given inputs."""

    exit_code = 2


class CheckpointError(SpanError):
    """Corrupt, truncated or incompatible checkpoint file."""

    exit_code = 4

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class DatasetError(SpanError):
    """Missing or malformed dataset file."""

    exit_code = 2

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{message}: {path}")
