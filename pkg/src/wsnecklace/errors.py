"""Exception hierarchy shared by the library and the command line."""


class InputError(ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class ValidationError(InputError):
    """A structural condition on a necklace, collection or curve failed."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class PreconditionError(InputError):
    """An operation was called on a value outside its domain (e.g. dummies present)."""


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed the configured size limit (CLI exit code 3)."""


class InvalidComplexError(RuntimeError):
    """A plabic tiling failed its complex check."""
