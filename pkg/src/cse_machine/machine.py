"""The CSE machine: states, instructions, and the single-step transition rules.

A state is the triple (control, stash, environment) plus the identity-bearing
stores (frame table and pair heap).  Both stacks are Python lists with the
top at the end.  The head of the control uniquely determines which rule
applies; `rule_for` is the pure classifier and `step` performs the transition
in place, consuming its input state.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import prelude
from . import reader as r
from .errors import (
    ArityMismatchError,
    MachineError,
    NoRuleAppliesError,
    NotCallableError,
    StepLimitError,
    UnboundVariableError,
)
from .reader import parse_program
from .values import (
    UNSPECIFIED,
    Closure,
    Continuation,
    Frame,
    PairHeap,
    Primitive,
    Symbol,
    _CallCC,
    is_callable,
    is_truthy,
    write_text,
)

### rule names (the closed enumeration)

RULE_DECOMPOSE_CALL = "Decompose n-ary procedure call"
RULE_CONSTRUCT_CLOSURE = "Construct closure"
RULE_DECOMPOSE_DEFINE = "Decompose variable declaration"
RULE_DECOMPOSE_SET = "Decompose variable assignment"
RULE_DECOMPOSE_IF = "Decompose conditional expression"
RULE_DECOMPOSE_SEQ = "Decompose expression sequence"
RULE_DECOMPOSE_BEGIN = "Decompose begin expression"
RULE_EVAL_PRIMITIVE = "Evaluate primitive"
RULE_LOOKUP = "Lookup variable"
RULE_APPLY_PRIMITIVE = "Apply operator or simple procedure"
RULE_APPLY_CLOSURE = "Apply closure"
RULE_APPLY_CALLCC = "Apply callcc"
RULE_APPLY_CONTINUATION = "Apply continuation"
RULE_RESTORE_ENV = "Restore environment"
RULE_ASSIGN = "Assign variable to value"
RULE_BRANCH_TRUE = "Branch to consequent"
RULE_BRANCH_FALSE = "Branch to alternative"
RULE_POP = "Remove unused value"

ALL_RULES = frozenset([
    RULE_DECOMPOSE_CALL, RULE_CONSTRUCT_CLOSURE, RULE_DECOMPOSE_DEFINE,
    RULE_DECOMPOSE_SET, RULE_DECOMPOSE_IF, RULE_DECOMPOSE_SEQ,
    RULE_DECOMPOSE_BEGIN, RULE_EVAL_PRIMITIVE, RULE_LOOKUP,
    RULE_APPLY_PRIMITIVE, RULE_APPLY_CLOSURE, RULE_APPLY_CALLCC,
    RULE_APPLY_CONTINUATION, RULE_RESTORE_ENV, RULE_ASSIGN,
    RULE_BRANCH_TRUE, RULE_BRANCH_FALSE, RULE_POP,
])

_LITERALS = (r.NumberLit, r.StringLit, r.BoolLit, r.SymbolLit, r.UnspecifiedLit)

### instructions

class Instruction:
    __slots__ = ()


class Asgn(Instruction):
    __slots__ = ("name", "span")

    def __init__(self, name, span=None):
        self.name = name
        self.span = span

    def __repr__(self):
        return f"ASGN {self.name}"


class Call(Instruction):
    __slots__ = ("arity", "span")

    def __init__(self, arity, span=None):
        self.arity = arity
        self.span = span

    def __repr__(self):
        return f"CALL {self.arity}"


class EnvRestore(Instruction):
    __slots__ = ("env_id",)

    def __init__(self, env_id):
        self.env_id = env_id

    def __repr__(self):
        return f"ENV E{self.env_id}"


class Branch(Instruction):
    __slots__ = ("consequent", "alternative", "span")

    def __init__(self, consequent, alternative, span=None):
        self.consequent = consequent
        self.alternative = alternative
        self.span = span

    def __repr__(self):
        return f"BRANCH {self.consequent.text} {self.alternative.text}"


class Pop(Instruction):
    __slots__ = ()

    def __repr__(self):
        return "POP"


POP = Pop()

### configuration, state, results

@dataclass(frozen=True)
class MachineConfig:
    step_limit: int = 200000
    proper_tail_calls: bool = False

    def __post_init__(self):
        if self.step_limit < 1:
            raise ValueError("step_limit must be >= 1")


DEFAULT_CONFIG = MachineConfig()


class State:
    """One machine state; owns its frame table, pair heap, and output."""

    __slots__ = ("control", "stash", "current_env", "frames", "pairs",
                 "step_number", "output", "config", "out_hook",
                 "_next_env_id", "_next_closure_id")

    def __init__(self, config: MachineConfig):
        frames, global_id = prelude.make_initial_environment()
        self.control: list = []
        self.stash: list = []
        self.current_env = global_id
        self.frames = frames
        self.pairs = PairHeap()
        self.step_number = 0
        self.output: list[str] = []
        self.config = config
        self.out_hook = None
        self._next_env_id = max(frames) + 1
        self._next_closure_id = 0

    @property
    def is_final(self) -> bool:
        return not self.control

    def new_frame(self, parent: int) -> int:
        env_id = self._next_env_id
        self.frames[env_id] = Frame(parent)
        self._next_env_id += 1
        return env_id

    def new_closure(self, lam) -> Closure:
        closure = Closure(lam, self.current_env, self._next_closure_id)
        self._next_closure_id += 1
        return closure

    def lookup(self, name: str):
        env_id = self.current_env
        while env_id is not None:
            frame = self.frames[env_id]
            if name in frame.bindings:
                return frame.bindings[name]
            env_id = frame.parent
        raise KeyError(name)

    def assign(self, name: str, value) -> None:
        """Mutate the nearest binding of `name`, else bind in the current frame."""
        env_id = self.current_env
        while env_id is not None:
            frame = self.frames[env_id]
            if name in frame.bindings:
                frame.bindings[name] = value
                return
            env_id = frame.parent
        self.frames[self.current_env].bindings[name] = value

    def emit(self, text: str) -> None:
        self.output.append(text)
        if self.out_hook is not None:
            self.out_hook(text)

    @property
    def output_text(self) -> str:
        return "".join(self.output)


class StepResult:
    """Outcome of one transition; `final` when the successor has empty control."""

    __slots__ = ("state", "rule", "value", "final")

    def __init__(self, state, rule, value=None, final=False):
        self.state = state
        self.rule = rule
        self.value = value
        self.final = final


def Next(state: State, rule: str) -> StepResult:
    return StepResult(state, rule)


def Final(state: State, rule: str, value) -> StepResult:
    return StepResult(state, rule, value=value, final=True)


@dataclass
class RunOutcome:
    value: object
    steps_taken: int
    final_state: State


### injection

def inject(program, config: MachineConfig | None = None, source: str | None = None) -> State:
    """Build the initial state: the program on the control, empty stash, E0."""
    config = config or DEFAULT_CONFIG
    state = State(config)
    program = list(program)
    if len(program) == 1:
        state.control.append(program[0])
    elif len(program) > 1:
        span = program[0].span.merge(program[-1].span)
        if source is not None:
            text = source[span.start_offset:span.end_offset]
        else:
            text = " ".join(e.text for e in program)
        state.control.append(r.Seq(span, text, tuple(program)))
    return state


### classification

def rule_for(state: State) -> str:
    """Name the unique rule selected by the head of the control.

    Pure: inspects the state without changing it.  Raises NotCallableError
    when a CALL head finds a non-callable callee, and NoRuleAppliesError for
    states that cannot arise from inject + step.
    """
    if state.is_final:
        raise NoRuleAppliesError("final state has no applicable rule",
                                 state.step_number)
    head = state.control[-1]
    if isinstance(head, Instruction):
        return _classify_instruction(state, head)
    if isinstance(head, r.Expr):
        return _classify_expression(head)
    raise NoRuleAppliesError(f"unknown control item {head!r}", state.step_number)


def _classify_expression(head) -> str:
    if isinstance(head, _LITERALS):
        return RULE_EVAL_PRIMITIVE
    if isinstance(head, r.Var):
        return RULE_LOOKUP
    if isinstance(head, r.Lambda):
        return RULE_CONSTRUCT_CLOSURE
    if isinstance(head, r.Define):
        return RULE_DECOMPOSE_DEFINE
    if isinstance(head, r.SetBang):
        return RULE_DECOMPOSE_SET
    if isinstance(head, r.If):
        return RULE_DECOMPOSE_IF
    if isinstance(head, r.Begin):
        return RULE_DECOMPOSE_BEGIN
    if isinstance(head, r.Seq):
        return RULE_DECOMPOSE_SEQ
    if isinstance(head, r.App):
        return RULE_DECOMPOSE_CALL
    raise NoRuleAppliesError(f"unknown expression {type(head).__name__}")


def _classify_instruction(state: State, head) -> str:
    stash = state.stash
    if isinstance(head, Call):
        n = head.arity
        if len(stash) < n + 1:
            raise NoRuleAppliesError(
                f"CALL {n} needs {n + 1} stash values, found {len(stash)}",
                state.step_number, head.span)
        callee = stash[-(n + 1)]
        if isinstance(callee, _CallCC):
            return RULE_APPLY_CALLCC
        if isinstance(callee, Closure):
            return RULE_APPLY_CLOSURE
        if isinstance(callee, Continuation):
            return RULE_APPLY_CONTINUATION
        if isinstance(callee, Primitive):
            return RULE_APPLY_PRIMITIVE
        raise NotCallableError(
            f"not callable: {_describe(state, callee)}",
            state.step_number, head.span)
    if isinstance(head, EnvRestore):
        return RULE_RESTORE_ENV
    if isinstance(head, Asgn):
        if not stash:
            raise NoRuleAppliesError("ASGN with empty stash", state.step_number, head.span)
        return RULE_ASSIGN
    if isinstance(head, Branch):
        if not stash:
            raise NoRuleAppliesError("BRANCH with empty stash", state.step_number, head.span)
        return RULE_BRANCH_TRUE if is_truthy(stash[-1]) else RULE_BRANCH_FALSE
    if isinstance(head, Pop):
        if not stash:
            raise NoRuleAppliesError("POP with empty stash", state.step_number)
        return RULE_POP
    raise NoRuleAppliesError(f"unknown instruction {head!r}", state.step_number)


def _describe(state: State, value) -> str:
    return write_text(value, state.pairs)


### transition

def step(state: State) -> StepResult:
    """Apply the unique matching rule, mutating `state` into its successor."""
    rule = rule_for(state)
    try:
        _HANDLERS[rule](state)
    except MachineError as error:
        if error.step_number is None:
            error.step_number = state.step_number
        if error.span is None:
            head = state.control[-1] if state.control else None
            error.span = getattr(head, "span", None)
        raise
    state.step_number += 1
    if state.is_final:
        value = state.stash[-1] if state.stash else UNSPECIFIED
        return Final(state, rule, value)
    return Next(state, rule)


def _literal_value(head):
    if isinstance(head, r.NumberLit):
        return head.value
    if isinstance(head, r.StringLit):
        return head.value
    if isinstance(head, r.BoolLit):
        return head.value
    if isinstance(head, r.SymbolLit):
        return Symbol(head.name)
    return UNSPECIFIED


def _do_eval_primitive(state):
    head = state.control.pop()
    state.stash.append(_literal_value(head))


def _do_lookup(state):
    head = state.control[-1]
    try:
        value = state.lookup(head.name)
    except KeyError:
        raise UnboundVariableError(head.name, state.step_number, head.span) from None
    state.control.pop()
    state.stash.append(value)


def _do_construct_closure(state):
    head = state.control.pop()
    state.stash.append(state.new_closure(head))


def _do_decompose_call(state):
    head = state.control.pop()
    control = state.control
    control.append(Call(len(head.operands), head.span))
    for operand in reversed(head.operands):
        control.append(operand)
    control.append(head.operator)


def _do_decompose_define(state):
    head = state.control.pop()
    state.control.append(Asgn(head.name, head.span))
    state.control.append(head.value)


def _do_decompose_if(state):
    head = state.control.pop()
    state.control.append(Branch(head.consequent, head.alternative, head.span))
    state.control.append(head.test)


def _do_decompose_seq(state):
    head = state.control.pop()
    exprs = head.exprs
    control = state.control
    control.append(exprs[-1])
    for expr in reversed(exprs[:-1]):
        control.append(POP)
        control.append(expr)


def _do_restore_env(state):
    head = state.control.pop()
    state.current_env = head.env_id


def _do_assign(state):
    head = state.control.pop()
    value = state.stash[-1]
    if isinstance(value, Closure) and value.name is None:
        value.name = head.name
    state.assign(head.name, value)


def _do_branch_true(state):
    head = state.control.pop()
    state.stash.pop()
    state.control.append(head.consequent)


def _do_branch_false(state):
    head = state.control.pop()
    state.stash.pop()
    state.control.append(head.alternative)


def _do_pop(state):
    state.control.pop()
    state.stash.pop()


def _do_apply_primitive(state):
    call = state.control[-1]
    n = call.arity
    stash = state.stash
    primitive = stash[-(n + 1)]
    prelude.check_arity(primitive, n)
    args = stash[-n:] if n else []
    # apply before touching control/stash so an error leaves the state intact
    # (and the error wrapper can read the CALL's span off the control head)
    result = prelude.apply_primitive(primitive, args, state.pairs, state.emit)
    state.control.pop()
    del stash[-(n + 1):]
    stash.append(result)


def _do_apply_closure(state):
    call = state.control[-1]
    n = call.arity
    stash = state.stash
    closure = stash[-(n + 1)]
    if len(closure.params) != n:
        raise ArityMismatchError(len(closure.params), n, state.step_number, call.span)
    args = stash[-n:] if n else []
    state.control.pop()
    del stash[-(n + 1):]
    control = state.control
    if not (state.config.proper_tail_calls
            and (not control or isinstance(control[-1], EnvRestore))):
        control.append(EnvRestore(state.current_env))
    frame_id = state.new_frame(closure.env_id)
    bindings = state.frames[frame_id].bindings
    for name, value in zip(closure.params, args):
        bindings[name] = value
    state.current_env = frame_id
    control.append(closure.body_item)


def _do_apply_callcc(state):
    call = state.control[-1]
    stash = state.stash
    if call.arity != 1:
        raise ArityMismatchError(1, call.arity, state.step_number, call.span)
    callee = stash[-1]
    if not is_callable(callee):
        raise NotCallableError(
            f"call/cc: argument is not callable: {_describe(state, callee)}",
            state.step_number, call.span)
    continuation = Continuation(tuple(state.control[:-1]), tuple(stash[:-2]),
                                state.current_env)
    stash[-2] = callee
    stash[-1] = continuation


def _do_apply_continuation(state):
    call = state.control[-1]
    n = call.arity
    stash = state.stash
    continuation = stash[-(n + 1)]
    args = stash[-n:] if n else []
    state.control[:] = list(continuation.control)
    state.stash[:] = list(continuation.stash) + args
    state.current_env = continuation.env_id


_HANDLERS = {
    RULE_EVAL_PRIMITIVE: _do_eval_primitive,
    RULE_LOOKUP: _do_lookup,
    RULE_CONSTRUCT_CLOSURE: _do_construct_closure,
    RULE_DECOMPOSE_CALL: _do_decompose_call,
    RULE_DECOMPOSE_DEFINE: _do_decompose_define,
    RULE_DECOMPOSE_SET: _do_decompose_define,
    RULE_DECOMPOSE_IF: _do_decompose_if,
    RULE_DECOMPOSE_SEQ: _do_decompose_seq,
    RULE_DECOMPOSE_BEGIN: _do_decompose_seq,
    RULE_RESTORE_ENV: _do_restore_env,
    RULE_ASSIGN: _do_assign,
    RULE_BRANCH_TRUE: _do_branch_true,
    RULE_BRANCH_FALSE: _do_branch_false,
    RULE_POP: _do_pop,
    RULE_APPLY_PRIMITIVE: _do_apply_primitive,
    RULE_APPLY_CLOSURE: _do_apply_closure,
    RULE_APPLY_CALLCC: _do_apply_callcc,
    RULE_APPLY_CONTINUATION: _do_apply_continuation,
}


### driving

def execute(source: str, config: MachineConfig | None = None, out_hook=None):
    """Yield (state, rule) pairs from the initial state until final.

    The first pair carries rule None.  Raises StepLimitError when the next
    transition would create state number `config.step_limit`.
    """
    config = config or DEFAULT_CONFIG
    program = parse_program(source)
    state = inject(program, config, source=source)
    if out_hook is not None:
        state.out_hook = out_hook
    yield state, None
    while not state.is_final:
        if state.step_number >= config.step_limit - 1:
            raise StepLimitError(config.step_limit)
        result = step(state)
        yield state, result.rule


def run(source: str, config: MachineConfig | None = None, out_hook=None) -> RunOutcome:
    """Run a program to completion and report its value and transition count."""
    state = None
    for state, _rule in execute(source, config, out_hook):
        pass
    value = state.stash[-1] if state.stash else UNSPECIFIED
    return RunOutcome(value, state.step_number, state)
