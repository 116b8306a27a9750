"""Numbered state snapshots and the TraceDocument JSON contract.

Every run can be serialized as an ordered sequence of full state snapshots;
the document is the contract between the CLI and the stepper UI, so the
serialization is canonical: frames in creation order, bindings in insertion
order, pairs in allocation order, fixed key order, stable separators.
"""

from __future__ import annotations

import json

from . import machine as m
from .errors import MachineError, StepLimitError
from .values import (
    NIL,
    UNSPECIFIED,
    Closure,
    Continuation,
    Pair,
    Primitive,
    Symbol,
    _CallCC,
    is_number,
    write_text,
)

FORMAT_VERSION = 1


### snapshotting

def snapshot(state: m.State) -> dict:
    """Render one state into plain JSON-ready data (order-stable)."""
    heap = state.pairs
    return {
        "step_number": state.step_number,
        "rule_applied": None,  # caller fills for states after the first
        "control": [_control_item(item, heap) for item in reversed(state.control)],
        "stash": [_value_descriptor(v, heap) for v in reversed(state.stash)],
        "current_env": state.current_env,
        "frames": [
            {
                "id": env_id,
                "parent": frame.parent,
                "bindings": {name: _value_descriptor(v, heap)
                             for name, v in frame.bindings.items()},
            }
            for env_id, frame in sorted(state.frames.items())
        ],
        "pairs": [
            {
                "id": pair_id,
                "car": _value_descriptor(cell[0], heap),
                "cdr": _value_descriptor(cell[1], heap),
            }
            for pair_id, cell in sorted(heap.cells.items())
        ],
        "output_so_far": state.output_text,
    }


def _expr_json(expr) -> dict:
    return {"source_text": expr.text, "span": expr.span.to_json()}


def _control_item(item, heap) -> dict:
    if isinstance(item, m.Instruction):
        if isinstance(item, m.Asgn):
            return {"opcode": "ASGN", "params": {"name": item.name}}
        if isinstance(item, m.Call):
            return {"opcode": "CALL", "params": {"arity": item.arity}}
        if isinstance(item, m.EnvRestore):
            return {"opcode": "ENV", "params": {}, "env_ref": item.env_id}
        if isinstance(item, m.Branch):
            return {"opcode": "BRANCH", "params": {
                "consequent": _expr_json(item.consequent),
                "alternative": _expr_json(item.alternative),
            }}
        return {"opcode": "POP", "params": {}}
    return _expr_json(item)


def _value_descriptor(value, heap) -> dict:
    if isinstance(value, bool):
        return {"kind": "boolean", "repr": "#t" if value else "#f"}
    if is_number(value):
        return {"kind": "number", "repr": write_text(value, heap)}
    if isinstance(value, str):
        return {"kind": "string", "repr": write_text(value, heap)}
    if isinstance(value, Symbol):
        return {"kind": "symbol", "repr": value.name}
    if value is NIL:
        return {"kind": "nil", "repr": "()"}
    if value is UNSPECIFIED:
        return {"kind": "unspecified", "repr": "#<unspecified>"}
    if isinstance(value, Pair):
        return {"kind": "pair", "repr": write_text(value, heap),
                "pair_ref": value.pair_id}
    if isinstance(value, Primitive):
        return {"kind": "primitive", "repr": f"#<primitive {value.name}>",
                "name": value.name}
    if isinstance(value, _CallCC):
        return {"kind": "primitive", "repr": "#<primitive call/cc>",
                "name": "call/cc"}
    if isinstance(value, Closure):
        return {
            "kind": "closure",
            "repr": repr(value),
            "closure_ref": value.closure_id,
            "env_ref": value.env_id,
            "params": list(value.params),
            "body_text": value.body_item.text,
        }
    if isinstance(value, Continuation):
        return {
            "kind": "continuation",
            "repr": "#<continuation>",
            "env_ref": value.env_id,
            "control": [_control_item(item, heap) for item in reversed(value.control)],
            "stash": [_value_descriptor(v, heap) for v in reversed(value.stash)],
        }
    raise TypeError(f"cannot serialize value {value!r}")


### recording

def record(source: str, config: m.MachineConfig | None = None) -> dict:
    """Run a program and capture every state; errors and the step limit are
    folded into the outcome while the states seen so far are kept."""
    config = config or m.DEFAULT_CONFIG
    states = []
    outcome = None
    try:
        for state, rule in m.execute(source, config):
            snap = snapshot(state)
            snap["rule_applied"] = rule
            states.append(snap)
            if state.is_final:
                value = state.stash[-1] if state.stash else UNSPECIFIED
                outcome = {"kind": "value", "repr": write_text(value, state.pairs)}
    except StepLimitError as error:
        outcome = {"kind": "step_limit", "repr": str(error)}
    except MachineError as error:
        outcome = {"kind": "error", "repr": str(error)}
    return {
        "version": FORMAT_VERSION,
        "source": source,
        "config": {
            "step_limit": config.step_limit,
            "proper_tail_calls": config.proper_tail_calls,
        },
        "states": states,
        "outcome": outcome,
    }


def replay_to(source: str, config: m.MachineConfig | None, k: int) -> m.State:
    """Recompute the run from the beginning and return the state numbered k."""
    if k < 0:
        raise ValueError(f"state number {k} out of range")
    config = config or m.DEFAULT_CONFIG
    try:
        for state, _rule in m.execute(source, config):
            if state.step_number == k:
                return state
            if state.is_final:
                break
    except MachineError:
        pass
    raise ValueError(f"state number {k} out of range")


def serialize(document: dict) -> str:
    """Canonical JSON text for a TraceDocument (byte-stable across runs)."""
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"
