"""Exception hierarchy shared by all layers."""


class GmdetError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GmdetError):
    """Bad user-supplied data (malformed connection, section, script...)."""


class TruncationError(GmdetError):
    """A Laurent series was asked for coefficients beyond its guaranteed window."""


class NonClosedError(GmdetError):
    """A form expected to be closed is not; carries the obstruction."""

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class PreconditionError(GmdetError):
    """Structured refusal: a check was invoked on an instance violating its hypotheses."""

    def __init__(self, check, condition, detail=""):
        self.check = check
        self.condition = condition
        self.detail = detail
        msg = f"{check}: precondition '{condition}' violated"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InternalError(GmdetError):
    """Invariant violation inside the engine (dimension mismatch, lost triangularity...)."""
