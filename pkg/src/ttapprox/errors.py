"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class ParseError(Exception):
    """A serialized file is malformed.

    Carries the byte offset at which parsing failed so corrupt files can
    be diagnosed without a hex editor.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
