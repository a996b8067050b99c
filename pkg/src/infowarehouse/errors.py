"""Error types and validation reports shared across the package.

Every raised error carries a stable machine-readable ``code`` so callers
(CLI, HTTP service, tests) can map failures without parsing messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class WarehouseError(Exception):
    """Base class for all archive/schema/retrieval errors."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"{type(self).__name__}({self.code!r}, {self.message!r})"


class NotFoundError(WarehouseError):
    """A referenced entity does not exist."""


class ConflictError(WarehouseError):
    """The operation conflicts with current lifecycle state."""


class InvalidInputError(WarehouseError):
    """The request is structurally or semantically invalid."""


class SchemaFormatError(InvalidInputError):
    """A schema document failed to parse; position is set for syntax errors."""

    def __init__(self, code: str, message: str, line: int | None = None, column: int | None = None):
        super().__init__(code, message)
        self.line = line
        self.column = column


class JournalError(WarehouseError):
    """The on-disk journal is corrupt or has a sequence gap."""

    def __init__(self, code: str, message: str, seq: int | None = None):
        super().__init__(code, message)
        self.seq = seq


@dataclass
class Finding:
    """One validation finding; severity is ``error`` or ``warning``."""

    severity: str
    code: str
    message: str
    subject: str = ""

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "subject": self.subject,
        }


@dataclass
class ValidationReport:
    """Collected findings from a validation pass. Empty report == consistent."""

    findings: list[Finding] = field(default_factory=list)

    def error(self, code: str, message: str, subject: str = "") -> None:
        self.findings.append(Finding("error", code, message, subject))

    def warning(self, code: str, message: str, subject: str = "") -> None:
        self.findings.append(Finding("warning", code, message, subject))

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {"findings": [f.to_dict() for f in self.findings], "ok": self.ok}
