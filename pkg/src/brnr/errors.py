"""Exception hierarchy shared by the library and the command line."""


class BrnrError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(BrnrError):
    """Malformed presentation file or multivector expression."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(BrnrError):
    """Input parses but violates a domain condition (bad p, t = 0, reducible polynomial, ...)."""


class BudgetExceeded(BrnrError):
    """A brute-force oracle or exhaustive search refused to run over its budget."""

    def __init__(self, message: str, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(message)


class PipelineInvariantError(BrnrError):
    """An internal consistency check failed; indicates a bug, never bad input."""
