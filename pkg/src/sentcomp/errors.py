"""Exception types shared across the package.

Everything raised on bad input derives from SentcompError so the CLI can
distinguish expected failures (exit 1) from bugs and I/O faults (exit 2).
"""


class SentcompError(Exception):
    """Base class for anticipated failures caused by input or arguments."""


class ParseError(SentcompError):
    """A structured text file is malformed; carries path and line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class ValidationError(SentcompError):
    """Well-formed input that violates a semantic requirement."""


class ArgumentError(SentcompError):
    """An operation was called with unusable parameters."""
