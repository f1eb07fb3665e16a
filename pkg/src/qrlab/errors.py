"""Exception types shared across the package."""


class QRLabError(Exception):
    """Base class for all errors raised by qrlab."""


class InvalidArgument(QRLabError, ValueError):
    pass


class UnsupportedParameter(QRLabError, ValueError):
    pass


class CapacityExceeded(QRLabError, RuntimeError):
    pass


class InconsistentInput(QRLabError, ValueError):
    pass


class InternalConsistencyError(QRLabError, AssertionError):
    """A construction produced something that theory says cannot happen."""


class ParseError(QRLabError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
