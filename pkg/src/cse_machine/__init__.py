"""A control/stash/environment notional machine for SICP Scheme.

The package evaluates a small Scheme by repeatedly applying single-step
transition rules to a (control, stash, environment) state, records every
state as a numbered snapshot, and serves the resulting trace to an
interactive stepper UI.
"""

from .errors import (
    ArityMismatchError,
    MachineError,
    NotCallableError,
    PrimitiveError,
    ReadError,
    SchemeError,
    StepLimitError,
    UnboundVariableError,
)
from .machine import (
    ALL_RULES,
    DEFAULT_CONFIG,
    MachineConfig,
    RunOutcome,
    State,
    execute,
    inject,
    run,
    rule_for,
    step,
)
from .reader import parse_expr, parse_program, tokenize, unparse
from .trace import record, replay_to, serialize, snapshot
from .values import UNSPECIFIED, display_text, write_text

__version__ = "0.1.0"

__all__ = [
    "ALL_RULES",
    "ArityMismatchError",
    "DEFAULT_CONFIG",
    "MachineConfig",
    "MachineError",
    "NotCallableError",
    "PrimitiveError",
    "ReadError",
    "RunOutcome",
    "SchemeError",
    "State",
    "StepLimitError",
    "UNSPECIFIED",
    "UnboundVariableError",
    "display_text",
    "execute",
    "inject",
    "parse_expr",
    "parse_program",
    "record",
    "replay_to",
    "rule_for",
    "run",
    "serialize",
    "snapshot",
    "step",
    "tokenize",
    "unparse",
    "write_text",
    "__version__",
]
