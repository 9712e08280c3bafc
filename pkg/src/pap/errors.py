"""Exception types shared by every layer of the package."""

from __future__ import annotations


class PapError(Exception):
    """Base error; ``code`` is a stable machine-readable identifier."""

    code = "ERROR"

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message or code
        super().__init__(f"{code}: {self.message}" if message else code)


class ParseError(PapError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        text = f"line {line}, column {column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__("PARSE_ERROR", text)


class InconsistentError(PapError):
    """Raised by optimisation tasks when the problem has no admissible solution."""

    def __init__(self, message: str = "no admissible solution exists"):
        super().__init__("INCONSISTENT", message)
