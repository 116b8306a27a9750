"""Error types shared by the reader, the machine, and the CLI."""

from __future__ import annotations


class SchemeError(Exception):
    """Base class for all errors raised on behalf of a Scheme program."""


class ReadError(SchemeError):
    """Lexical or syntactic error, reported with the offending source span."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is not None:
            return f"parse error: {self.message} at {self.span.start_line}:{self.span.start_col}"
        return f"parse error: {self.message}"


class MachineError(SchemeError):
    """Runtime error carrying the offending state number and source span.

    step_number/span may be filled in by the machine after the error is
    raised (primitives do not know where they were called from).
    """

    def __init__(self, message, step_number=None, span=None):
        super().__init__(message)
        self.message = message
        self.step_number = step_number
        self.span = span

    def __str__(self):
        where = []
        if self.span is not None:
            where.append(f"at {self.span.start_line}:{self.span.start_col}")
        if self.step_number is not None:
            where.append(f"(state {self.step_number})")
        if where:
            return f"{self.message} {' '.join(where)}"
        return self.message


class UnboundVariableError(MachineError):
    def __init__(self, name, step_number=None, span=None):
        super().__init__(f"unbound variable {name}", step_number, span)
        self.name = name


class NotCallableError(MachineError):
    pass


class ArityMismatchError(MachineError):
    def __init__(self, expected, got, step_number=None, span=None):
        super().__init__(f"expected {expected} argument(s), got {got}", step_number, span)
        self.expected = expected
        self.got = got


class PrimitiveError(MachineError):
    """A primitive was applied to unsuitable arguments (car of non-pair, ...)."""


class DivisionByZeroError(PrimitiveError):
    def __init__(self, step_number=None, span=None):
        super().__init__("division by zero", step_number, span)


class SchemeUserError(MachineError):
    """Raised by the `error` primitive; not catchable inside the language."""


class StepLimitError(MachineError):
    def __init__(self, limit):
        super().__init__(f"step limit exceeded at {limit}")
        self.limit = limit

    def __str__(self):
        return self.message


class NoRuleAppliesError(MachineError):
    """No transition rule matches; signals a malformed state (a machine bug)."""
