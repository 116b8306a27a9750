"""Run-time values, environment frames, and the pair heap.

Pairs and frames live in identity-bearing stores (PairHeap / the machine's
frame table) so that destructive updates are visible through every value
that references the same id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PrimitiveError
from .reader import _format_number, _format_string


@dataclass(frozen=True)
class Symbol:
    name: str


class _Nil:
    """The empty list; a single shared instance."""

    def __repr__(self):
        return "()"


class _Unspecified:
    """Value of `define`, `set-car!`, one-armed `if` misses, and friends."""

    def __repr__(self):
        return "#<unspecified>"


class _CallCC:
    """The continuation-generating pseudoprocedure bound to call/cc."""

    name = "call/cc"

    def __repr__(self):
        return "#<primitive call/cc>"


NIL = _Nil()
UNSPECIFIED = _Unspecified()
CALLCC = _CallCC()


@dataclass(frozen=True)
class Pair:
    """Reference to a cons cell in the owning state's PairHeap."""

    pair_id: int


@dataclass(frozen=True, repr=False)
class Primitive:
    """Built-in procedure: name, arity bounds, effect class, and behavior."""

    name: str
    min_args: int
    max_args: int | None  # None = variadic
    effect: str  # pure | heap-allocating | heap-mutating | output
    fn: object = field(repr=False, compare=False)

    def __repr__(self):
        return f"#<primitive {self.name}>"

    @property
    def arity_text(self) -> str:
        if self.max_args is None:
            return f"at least {self.min_args}"
        if self.min_args == self.max_args:
            return str(self.min_args)
        return f"{self.min_args} to {self.max_args}"


class Closure:
    """User procedure: parameter names, body, and the captured frame id."""

    __slots__ = ("params", "body_item", "body", "env_id", "closure_id", "name")

    def __init__(self, lam, env_id: int, closure_id: int):
        self.params = lam.params
        self.body = lam.body
        self.body_item = lam.body_item
        self.env_id = env_id
        self.closure_id = closure_id
        self.name = None  # filled by the first ASGN that binds this closure

    def __repr__(self):
        return f"#<procedure {self.name or 'anonymous'}>"


class Continuation:
    """Reified machine state: captured control, stash, and environment id."""

    __slots__ = ("control", "stash", "env_id")

    def __init__(self, control: tuple, stash: tuple, env_id: int):
        self.control = control
        self.stash = stash
        self.env_id = env_id

    def __repr__(self):
        return "#<continuation>"


class Frame:
    """One environment frame: ordered bindings plus an optional parent id."""

    __slots__ = ("bindings", "parent")

    def __init__(self, parent: int | None = None):
        self.bindings: dict = {}
        self.parent = parent


class PairHeap:
    """Identity-bearing cons-cell store; ids are never reused within a run."""

    __slots__ = ("cells", "next_id")

    def __init__(self):
        self.cells: dict[int, list] = {}
        self.next_id = 0

    def alloc(self, car, cdr) -> Pair:
        pair = Pair(self.next_id)
        self.cells[self.next_id] = [car, cdr]
        self.next_id += 1
        return pair

    def car(self, pair: Pair):
        return self.cells[pair.pair_id][0]

    def cdr(self, pair: Pair):
        return self.cells[pair.pair_id][1]

    def set_car(self, pair: Pair, value) -> None:
        self.cells[pair.pair_id][0] = value

    def set_cdr(self, pair: Pair, value) -> None:
        self.cells[pair.pair_id][1] = value

    def from_list(self, values) -> object:
        result = NIL
        for value in reversed(values):
            result = self.alloc(value, result)
        return result


def is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def is_callable(value) -> bool:
    return isinstance(value, (Primitive, Closure, Continuation, _CallCC))


def is_truthy(value) -> bool:
    return value is not False


def write_text(value, heap: PairHeap) -> str:
    """External representation (quotes and escapes on strings)."""
    return _render(value, heap, display=False, path=())


def display_text(value, heap: PairHeap) -> str:
    """Human output representation (strings raw), used by `display`."""
    return _render(value, heap, display=True, path=())


def _render(value, heap, display, path) -> str:
    if isinstance(value, bool):
        return "#t" if value else "#f"
    if is_number(value):
        return _format_number(value)
    if isinstance(value, str):
        return value if display else _format_string(value)
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, Pair):
        return _render_pair(value, heap, display, path)
    # Nil, Unspecified, Primitive, Closure, Continuation, CallCC
    return repr(value)


def _render_pair(pair, heap, display, path) -> str:
    parts = []
    seen = set(path)
    current = pair
    while isinstance(current, Pair):
        if current.pair_id in seen:
            parts.append("...")
            return f"({' '.join(parts)})"
        seen.add(current.pair_id)
        parts.append(_render(heap.car(current), heap, display, tuple(seen)))
        current = heap.cdr(current)
    if current is not NIL:
        parts.append(".")
        parts.append(_render(current, heap, display, tuple(seen)))
    return f"({' '.join(parts)})"


def structurally_equal(a, b, heap: PairHeap) -> bool:
    """Deep equality for `equal?`; pairs compare by structure, numbers by kind."""
    if isinstance(a, Pair) and isinstance(b, Pair):
        if a.pair_id == b.pair_id:
            return True
        return (structurally_equal(heap.car(a), heap.car(b), heap)
                and structurally_equal(heap.cdr(a), heap.cdr(b), heap))
    return identical(a, b)


def identical(a, b) -> bool:
    """`eq?`: identity on pairs/procedures, name equality on symbols."""
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if is_number(a) and is_number(b):
        return type(a) is type(b) and a == b
    if isinstance(a, Symbol) and isinstance(b, Symbol):
        return a.name == b.name
    if isinstance(a, Pair) and isinstance(b, Pair):
        return a.pair_id == b.pair_id
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return a is b
