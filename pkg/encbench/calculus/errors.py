class SourceSyntaxError(ValueError):
    """Raised by the source/target parsers; carries the 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IllFormedTermError(ValueError):
    """A term violates a syntactic invariant (unbound variable, empty sum, ...)."""


class ArityError(ValueError):
    """An output and an input on the same channel disagree on arity."""

    def __init__(self, channel: str, output_arity: int, input_arity: int):
        super().__init__(
            f"Arity mismatch on channel {channel}: output carries {output_arity} "
            f"names, input expects {input_arity}."
        )
        self.channel = channel


class PolicyError(KeyError):
    """The renaming policy has no image for a name the encoder needs."""


class ProbeBudgetExceeded(RuntimeError):
    """A scratch lock-evaluation run did not settle within its step budget."""
