"""Exception hierarchy shared by every module."""


class SuperAlgebraError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class ChartMismatchError(SuperAlgebraError):
    code = "chart-mismatch"


class DomainError(SuperAlgebraError):
    code = "domain"


class DuplicateNameError(DomainError):
    code = "duplicate-name"


class PreconditionError(SuperAlgebraError):
    code = "precondition"


class ClosureError(SuperAlgebraError):
    code = "closure"


class InvalidTripleError(SuperAlgebraError):
    code = "invalid-triple"


class ContactRequiredError(PreconditionError):
    code = "contact-required"


class InternalConsistencyError(SuperAlgebraError):
    """Raised when a result violates an identity that must hold by construction."""

    code = "internal"


class ParseError(SuperAlgebraError):
    """Input text could not be parsed.

    ``kind`` is ``"syntax"`` or ``"semantic"``; ``line`` and ``column`` are
    1-based and may be ``None`` when the location is unknown.
    """

    def __init__(self, message, line=None, column=None, kind="syntax", code=None):
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind
        self.code = code or ("E100" if kind == "syntax" else "E200")
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.line is not None:
            where = f"{self.line}:{self.column or 1}: "
        return f"{where}{self.kind} error [{self.code}]: {self.message}"
