"""Exception types shared across the package."""


class EquihomError(Exception):
    """Base class for all errors raised by equihom."""


class ParseError(EquihomError, ValueError):
    """A text input could not be parsed; carries the offending line."""

    def __init__(self, message, line_no=None, token=None):
        self.line_no = line_no
        self.token = token
        where = f"line {line_no}: " if line_no is not None else ""
        tok = f" (token {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{tok}")


class PreconditionError(EquihomError, ValueError):
    """An operation was called on input violating its hypotheses."""


class DomainError(EquihomError, ValueError):
    """An argument lies outside the domain of an operation (e.g. H not in F)."""


class SizeCapError(EquihomError, RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, cap_name, limit, requested):
        self.cap_name = cap_name
        self.limit = limit
        self.requested = requested
        super().__init__(f"size cap {cap_name}={limit} exceeded (requested {requested})")


class TruncationError(EquihomError, ValueError):
    """A truncated resolution or model is too short for the requested range."""


class ConsistencyError(EquihomError, AssertionError):
    """An internal invariant failed; indicates a bug rather than bad input."""
