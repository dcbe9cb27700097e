class MmcheckError(Exception):
    """Base class for errors raised by mmcheck."""


class DomainError(MmcheckError, ValueError):
    """A function was evaluated outside the set where it is smooth."""


class OrderError(MmcheckError, ValueError):
    """A derivative of higher order than available was requested."""


class ParseError(MmcheckError, ValueError):
    """Syntax error in an expression, with the offending character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position
