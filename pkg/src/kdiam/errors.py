"""Exception taxonomy.

Parse/usage problems and math-level problems are distinct because the CLI
maps them to different exit codes (2 and 3 respectively).
"""


class KdiamError(Exception):
    """Base class for all package errors."""


class ParseError(KdiamError):
    """Malformed sequence expression, space file, or CLI argument."""


class ConfigError(KdiamError):
    """Inconsistent resolution/grid/grade configuration."""


class DomainError(KdiamError):
    """Evaluation outside a sequence's domain (e.g. zero denominator)."""


class RangeError(KdiamError):
    """A value left the representable range of the working precision."""


class UnboundedSetError(KdiamError):
    """A weight sequence fails the boundedness check; carries the grade."""

    def __init__(self, grade: int, message: str | None = None):
        self.grade = grade
        super().__init__(message or f"weights unbounded against grade {grade}")


class DegenerateMatrixError(KdiamError):
    """A diameter vanished where a positive value is required."""
