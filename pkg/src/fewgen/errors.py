"""Exception hierarchy for fewgen.

Every error raised by the library derives from `FewgenError` and from the builtin type a
caller would naturally catch (`ValueError` for bad data, `ArithmeticError` for numerical
blow-ups), so both `except FewgenError` and `except ValueError` work.
"""

from __future__ import annotations


class FewgenError(Exception):
    """Base class of all fewgen errors."""


class GraphFormatError(FewgenError, ValueError):
    """Transaction-format text that cannot be parsed into a dataset."""

    def __init__(self, message: str, lineno: int | None = None) -> None:
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidGraphError(FewgenError, ValueError):
    """A labeled graph violates a structural invariant."""


class VocabularyError(FewgenError, ValueError):
    """Label vocabularies disagree or a value lies outside a vocabulary."""


class InvalidCodeError(FewgenError, ValueError):
    """A DFS code cannot be decoded or canonized."""


class NumericalError(FewgenError, ArithmeticError):
    """A loss, gradient or parameter became non-finite."""


class ConfigError(FewgenError, ValueError):
    """Invalid configuration value or unknown configuration key."""


class UsageError(FewgenError):
    """Command-line usage error."""


DATA_ERRORS: tuple[type[Exception], ...] = (
    GraphFormatError,
    InvalidGraphError,
    VocabularyError,
    InvalidCodeError,
    OSError,
)
