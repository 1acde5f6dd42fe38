class InputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class NumericalError(ArithmeticError):
    """Raised when a factorization or training step breaks down numerically."""


class FormatError(ValueError):
    """Raised on malformed or incompatible on-disk files."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
