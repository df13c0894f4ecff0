"""Exception hierarchy shared by the library and the CLI."""


class CollatzError(Exception):
    """Base class for all errors raised by collatz_slots."""


class InvalidInputError(CollatzError, ValueError):
    pass


class OrbitCapExceeded(CollatzError):
    """Raised when a trajectory does not reach 1 within the step cap.

    This never implies the start value is outside the tree; the cap may
    simply be too small.
    """

    def __init__(self, n, cap):
        super().__init__(f"orbit of {n} did not reach 1 within {cap} steps")
        self.n = n
        self.cap = cap


class EmptyDomainError(CollatzError):
    pass


class CheckpointError(CollatzError):
    pass


class ParseError(CollatzError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntegrityError(CollatzError):
    pass
