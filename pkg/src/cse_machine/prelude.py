"""The initial global environment and the behavior of every primitive.

Primitives receive already-evaluated arguments plus the pair heap and an
output sink; they either return a value or raise a PrimitiveError (the
machine fills in the state number and call-site span).
"""

from __future__ import annotations

from .errors import (
    ArityMismatchError,
    DivisionByZeroError,
    PrimitiveError,
    SchemeUserError,
)
from .values import (
    CALLCC,
    NIL,
    UNSPECIFIED,
    Frame,
    Pair,
    PairHeap,
    Primitive,
    Symbol,
    display_text,
    identical,
    is_callable,
    is_number,
    structurally_equal,
    write_text,
)

### argument checks

def _want_number(name, value):
    if not is_number(value):
        raise PrimitiveError(f"{name}: expected a number, got {_brief(value)}")
    return value


def _want_integer(name, value):
    if not isinstance(value, int) or isinstance(value, bool):
        raise PrimitiveError(f"{name}: expected an integer, got {_brief(value)}")
    return value


def _want_pair(name, value):
    if not isinstance(value, Pair):
        raise PrimitiveError(f"{name}: expected a pair, got {_brief(value)}")
    return value


def _brief(value) -> str:
    if isinstance(value, bool):
        return "#t" if value else "#f"
    if is_number(value) or isinstance(value, (str, Symbol)):
        return repr(value) if isinstance(value, str) else str(value)
    return repr(value)


### numeric primitives

def _add(args, heap, out):
    total = 0
    for a in args:
        total = total + _want_number("+", a)
    return total


def _mul(args, heap, out):
    total = 1
    for a in args:
        total = total * _want_number("*", a)
    return total


def _sub(args, heap, out):
    if len(args) == 1:
        return -_want_number("-", args[0])
    total = _want_number("-", args[0])
    for a in args[1:]:
        total = total - _want_number("-", a)
    return total


def _divide(a, b):
    if b == 0:
        raise DivisionByZeroError()
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return a / b
    return a / b


def _div(args, heap, out):
    if len(args) == 1:
        return _divide(1, _want_number("/", args[0]))
    total = _want_number("/", args[0])
    for a in args[1:]:
        total = _divide(total, _want_number("/", a))
    return total


def _comparison(name, relation):
    def run(args, heap, out):
        for a in args:
            _want_number(name, a)
        return all(relation(a, b) for a, b in zip(args, args[1:]))

    return run


def _quotient_pair(name, args):
    a = _want_integer(name, args[0])
    b = _want_integer(name, args[1])
    if b == 0:
        raise DivisionByZeroError()
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return a, b, q


def _quotient(args, heap, out):
    return _quotient_pair("quotient", args)[2]


def _remainder(args, heap, out):
    a, b, q = _quotient_pair("remainder", args)
    return a - b * q


def _modulo(args, heap, out):
    a = _want_integer("modulo", args[0])
    b = _want_integer("modulo", args[1])
    if b == 0:
        raise DivisionByZeroError()
    return a % b


def _abs(args, heap, out):
    return abs(_want_number("abs", args[0]))


def _min_max(name, pick):
    def run(args, heap, out):
        for a in args:
            _want_number(name, a)
        result = pick(args)
        if any(isinstance(a, float) for a in args):
            return float(result)
        return result

    return run


### pairs and lists

def _cons(args, heap, out):
    return heap.alloc(args[0], args[1])


def _car(args, heap, out):
    return heap.car(_want_pair("car", args[0]))


def _cdr(args, heap, out):
    return heap.cdr(_want_pair("cdr", args[0]))


def _list(args, heap, out):
    return heap.from_list(args)


def _set_car(args, heap, out):
    heap.set_car(_want_pair("set-car!", args[0]), args[1])
    return UNSPECIFIED


def _set_cdr(args, heap, out):
    heap.set_cdr(_want_pair("set-cdr!", args[0]), args[1])
    return UNSPECIFIED


def _proper_list_items(name, value, heap):
    items = []
    seen = set()
    while isinstance(value, Pair):
        if value.pair_id in seen:
            raise PrimitiveError(f"{name}: cyclic list")
        seen.add(value.pair_id)
        items.append(heap.car(value))
        value = heap.cdr(value)
    if value is not NIL:
        raise PrimitiveError(f"{name}: expected a proper list")
    return items


def _length(args, heap, out):
    return len(_proper_list_items("length", args[0], heap))


def _append(args, heap, out):
    if not args:
        return NIL
    result = args[-1]
    for arg in reversed(args[:-1]):
        for item in reversed(_proper_list_items("append", arg, heap)):
            result = heap.alloc(item, result)
    return result


def _reverse(args, heap, out):
    items = _proper_list_items("reverse", args[0], heap)
    return heap.from_list(list(reversed(items)))


### predicates and misc

def _eq(args, heap, out):
    return identical(args[0], args[1])


def _equal(args, heap, out):
    return structurally_equal(args[0], args[1], heap)


def _not(args, heap, out):
    return args[0] is False


def _type_predicate(check):
    def run(args, heap, out):
        return check(args[0])

    return run


def _string_to_symbol(args, heap, out):
    if not isinstance(args[0], str):
        raise PrimitiveError(f"string->symbol: expected a string, got {_brief(args[0])}")
    return Symbol(args[0])


def _display(args, heap, out):
    out(display_text(args[0], heap))
    return UNSPECIFIED


def _newline(args, heap, out):
    out("\n")
    return UNSPECIFIED


def _error(args, heap, out):
    parts = []
    for i, a in enumerate(args):
        parts.append(display_text(a, heap) if i == 0 else write_text(a, heap))
    raise SchemeUserError("error: " + " ".join(parts))


### the table

def _table() -> dict[str, Primitive]:
    def prim(name, min_args, max_args, effect, fn):
        return Primitive(name, min_args, max_args, effect, fn)

    entries = [
        prim("+", 0, None, "pure", _add),
        prim("-", 1, None, "pure", _sub),
        prim("*", 0, None, "pure", _mul),
        prim("/", 1, None, "pure", _div),
        prim("=", 2, None, "pure", _comparison("=", lambda a, b: a == b)),
        prim("<", 2, None, "pure", _comparison("<", lambda a, b: a < b)),
        prim(">", 2, None, "pure", _comparison(">", lambda a, b: a > b)),
        prim("<=", 2, None, "pure", _comparison("<=", lambda a, b: a <= b)),
        prim(">=", 2, None, "pure", _comparison(">=", lambda a, b: a >= b)),
        prim("quotient", 2, 2, "pure", _quotient),
        prim("remainder", 2, 2, "pure", _remainder),
        prim("modulo", 2, 2, "pure", _modulo),
        prim("abs", 1, 1, "pure", _abs),
        prim("min", 1, None, "pure", _min_max("min", min)),
        prim("max", 1, None, "pure", _min_max("max", max)),
        prim("cons", 2, 2, "heap-allocating", _cons),
        prim("car", 1, 1, "pure", _car),
        prim("cdr", 1, 1, "pure", _cdr),
        prim("list", 0, None, "heap-allocating", _list),
        prim("append", 0, None, "heap-allocating", _append),
        prim("reverse", 1, 1, "heap-allocating", _reverse),
        prim("length", 1, 1, "pure", _length),
        prim("set-car!", 2, 2, "heap-mutating", _set_car),
        prim("set-cdr!", 2, 2, "heap-mutating", _set_cdr),
        prim("pair?", 1, 1, "pure", _type_predicate(lambda v: isinstance(v, Pair))),
        prim("null?", 1, 1, "pure", _type_predicate(lambda v: v is NIL)),
        prim("eq?", 2, 2, "pure", _eq),
        prim("equal?", 2, 2, "pure", _equal),
        prim("not", 1, 1, "pure", _not),
        prim("number?", 1, 1, "pure", _type_predicate(is_number)),
        prim("boolean?", 1, 1, "pure", _type_predicate(lambda v: isinstance(v, bool))),
        prim("symbol?", 1, 1, "pure", _type_predicate(lambda v: isinstance(v, Symbol))),
        prim("string?", 1, 1, "pure", _type_predicate(lambda v: isinstance(v, str))),
        prim("procedure?", 1, 1, "pure", _type_predicate(is_callable)),
        prim("string->symbol", 1, 1, "pure", _string_to_symbol),
        prim("display", 1, 1, "output", _display),
        prim("newline", 0, 0, "output", _newline),
        prim("error", 1, None, "output", _error),
    ]
    return {p.name: p for p in entries}


PRIMITIVES = _table()


def make_initial_environment() -> tuple[dict[int, Frame], int]:
    """Build the global frame; returns the frame table and the global frame id."""
    frame = Frame(parent=None)
    for name, primitive in PRIMITIVES.items():
        frame.bindings[name] = primitive
    frame.bindings["call/cc"] = CALLCC
    frame.bindings["call-with-current-continuation"] = CALLCC
    return {0: frame}, 0


def check_arity(primitive: Primitive, n: int) -> None:
    if n < primitive.min_args or (primitive.max_args is not None and n > primitive.max_args):
        raise ArityMismatchError(primitive.arity_text, n)


def apply_primitive(primitive: Primitive, args: list, heap: PairHeap, out) -> object:
    """Apply a primitive to evaluated arguments; arity must already hold."""
    return primitive.fn(args, heap, out)
