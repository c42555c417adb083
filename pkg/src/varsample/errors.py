"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the operation's domain."""


class ConfigurationError(RuntimeError):
    """A setup problem: missing tail bound, insufficient radius, bad config."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge within its budget."""


class FormatError(ValueError):
    """Malformed file content. Carries the byte offset of the defect."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
