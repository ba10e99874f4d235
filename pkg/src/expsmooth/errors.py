"""Exception types raised by the smoothing library."""


class SmoothingError(ValueError):
    """Base class for all library errors."""


class InvalidArgumentError(SmoothingError):
    """An argument is outside the domain of the operation."""


class OutOfOrderError(SmoothingError):
    """A timestamp arrived earlier than the method's ordering contract allows."""

    def __init__(self, message, *, t=None, last_t=None, strict=False):
        super().__init__(message)
        self.t = t
        self.last_t = last_t
        self.strict = strict


class DegenerateStateError(SmoothingError):
    """The smoother state cannot be normalized or advanced."""


class EmptyInputError(SmoothingError):
    """An operation that needs at least one observation received none."""
