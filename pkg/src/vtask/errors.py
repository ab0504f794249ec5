"""Exception types shared across the package.

Every error raised by the library is a subclass of :class:`VTaskError`, so
callers (notably the CLI) can map failure kinds to exit codes without
string matching.
"""

from __future__ import annotations

from dataclasses import dataclass


class VTaskError(Exception):
    """Base class for all library errors."""


class MalformedInputError(VTaskError):
    """Inputs violate a structural precondition (width mismatch, bad index,
    duplicate program)."""


class DomainError(VTaskError):
    """An object is used outside its domain (statement not in the language,
    mismatched state spaces)."""


class CapacityError(VTaskError):
    """An engineering cap was exceeded. The caps are implementation limits,
    not part of the underlying model; the message names the cap."""

    def __init__(self, message: str, *, cap_name: str, cap_value: int):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value


class TaskValidationError(VTaskError):
    """A candidate task violates one of the task invariants.

    ``code`` is one of: ``empty-inputs``, ``empty-outputs``,
    ``input-not-statement``, ``input-equals-language``,
    ``output-outside-extension``, ``output-equals-extension``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class EncodingError(VTaskError):
    """A classification example cannot be encoded as a task."""


@dataclass(frozen=True)
class ParseDiagnostic:
    """One parse or semantic problem, anchored to a source line."""

    line: int
    column: int | None
    message: str

    def render(self) -> str:
        if self.column is not None:
            return f"line {self.line}, col {self.column}: {self.message}"
        return f"line {self.line}: {self.message}"


class ParseError(VTaskError):
    """A single malformed fragment (used for standalone literal parsing)."""

    def __init__(self, message: str, *, column: int | None = None):
        super().__init__(message)
        self.column = column


class TaskFileError(VTaskError):
    """A task file failed to parse; carries every diagnostic found."""

    def __init__(self, diagnostics: tuple[ParseDiagnostic, ...]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(d.render() for d in diagnostics))
