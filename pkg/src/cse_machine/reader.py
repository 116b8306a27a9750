"""Reader for SICP Scheme: tokenizer, parser, and parse-time desugarings.

The parser lowers the surface language into the core expression tree the
machine evaluates.  Two desugarings happen here so the machine's rule set
stays small: procedure-style `define` becomes `define` + `lambda`, and
quoted data becomes `list`/`cons` applications (a quoted symbol becomes a
symbol literal).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ReadError

### tokens

LPAREN = "lparen"
RPAREN = "rparen"
QUOTE = "quote"
NUMBER = "number"
STRING = "string"
BOOLEAN = "boolean"
SYMBOL = "symbol"

# Identifier alphabet: R7RS initials/subsequents plus the extended characters
# used by names like set-car! and string->symbol.
_SYMBOL_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789"
    "!$%&*/:<=>?^_~+-.@"
)

_NUMBER_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z")
_LOOKS_NUMERIC_RE = re.compile(r"[+-]?\.?\d")
_SPECIAL_REALS = {
    "+inf.0": float("inf"),
    "-inf.0": float("-inf"),
    "+nan.0": float("nan"),
    "-nan.0": float("nan"),
}

_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}

RESERVED_WORDS = frozenset(["define", "lambda", "set!", "if", "begin", "quote"])


@dataclass(frozen=True)
class Span:
    """Half-open source region; offsets count code points, line/col are 1-based."""

    start_offset: int
    end_offset: int
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def merge(self, other: "Span") -> "Span":
        first = self if self.start_offset <= other.start_offset else other
        last = self if self.end_offset >= other.end_offset else other
        return Span(first.start_offset, last.end_offset,
                    first.start_line, first.start_col, last.end_line, last.end_col)

    def to_json(self) -> dict:
        return {
            "start_offset": self.start_offset,
            "end_offset": self.end_offset,
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


### tokenizer

class _Scanner:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def at_end(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self) -> str:
        return self.source[self.pos]

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def mark(self):
        return self.pos, self.line, self.col

    def span_from(self, mark) -> Span:
        pos, line, col = mark
        return Span(pos, self.pos, line, col, self.line, self.col)


def _is_delimiter(ch: str) -> bool:
    return ch.isspace() or ch in "()';\""


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens; `;` comments run to end of line."""
    scanner = _Scanner(source)
    tokens = []
    while not scanner.at_end():
        ch = scanner.peek()
        if ch.isspace():
            scanner.advance()
            continue
        if ch == ";":
            while not scanner.at_end() and scanner.peek() != "\n":
                scanner.advance()
            continue
        mark = scanner.mark()
        if ch == "(":
            scanner.advance()
            tokens.append(Token(LPAREN, "(", scanner.span_from(mark)))
        elif ch == ")":
            scanner.advance()
            tokens.append(Token(RPAREN, ")", scanner.span_from(mark)))
        elif ch == "'":
            scanner.advance()
            tokens.append(Token(QUOTE, "'", scanner.span_from(mark)))
        elif ch == '"':
            tokens.append(_scan_string(scanner, mark))
        else:
            tokens.append(_scan_word(scanner, mark))
    return tokens


def _scan_string(scanner: _Scanner, mark) -> Token:
    scanner.advance()  # opening quote
    while True:
        if scanner.at_end():
            raise ReadError("unterminated string", scanner.span_from(mark))
        ch = scanner.advance()
        if ch == '"':
            break
        if ch == "\\":
            if scanner.at_end():
                raise ReadError("unterminated string", scanner.span_from(mark))
            esc = scanner.advance()
            if esc not in _STRING_ESCAPES:
                raise ReadError(f"unknown string escape \\{esc}", scanner.span_from(mark))
    span = scanner.span_from(mark)
    return Token(STRING, scanner.source[span.start_offset:span.end_offset], span)


def _scan_word(scanner: _Scanner, mark) -> Token:
    while not scanner.at_end() and not _is_delimiter(scanner.peek()):
        scanner.advance()
    span = scanner.span_from(mark)
    word = scanner.source[span.start_offset:span.end_offset]
    if word in ("#t", "#f"):
        return Token(BOOLEAN, word, span)
    if word in _SPECIAL_REALS:
        return Token(NUMBER, word, span)
    if _NUMBER_RE.match(word):
        return Token(NUMBER, word, span)
    if _LOOKS_NUMERIC_RE.match(word):
        raise ReadError(f"malformed number {word}", span)
    if word.startswith("#"):
        raise ReadError(f"unsupported '#' syntax {word}", span)
    bad = next((c for c in word if c not in _SYMBOL_CHARS), None)
    if bad is not None:
        raise ReadError(f"invalid character {bad!r} in identifier {word}", span)
    return Token(SYMBOL, word, span)


def _string_value(token: Token) -> str:
    text = token.text[1:-1]
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            out.append(_STRING_ESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _number_value(token: Token):
    if token.text in _SPECIAL_REALS:
        return _SPECIAL_REALS[token.text]
    if any(c in token.text for c in ".eE"):
        return float(token.text)
    return int(token.text)


### expression tree

@dataclass(eq=False)
class Expr:
    """Core expression node; `text` is what the node shows as a control item."""

    span: Span
    text: str


@dataclass(eq=False)
class NumberLit(Expr):
    value: object  # int | float


@dataclass(eq=False)
class StringLit(Expr):
    value: str


@dataclass(eq=False)
class BoolLit(Expr):
    value: bool


@dataclass(eq=False)
class SymbolLit(Expr):
    name: str


@dataclass(eq=False)
class UnspecifiedLit(Expr):
    """Synthesized alternative of a one-armed `if`; yields the unspecified value."""


@dataclass(eq=False)
class Var(Expr):
    name: str


@dataclass(eq=False)
class Lambda(Expr):
    params: tuple
    body: tuple
    body_item: Expr  # body[0] for single-expression bodies, else a Seq


@dataclass(eq=False)
class Define(Expr):
    name: str
    value: Expr


@dataclass(eq=False)
class SetBang(Expr):
    name: str
    value: Expr


@dataclass(eq=False)
class If(Expr):
    test: Expr
    consequent: Expr
    alternative: Expr
    one_armed: bool = False


@dataclass(eq=False)
class Seq(Expr):
    """Implicit expression sequence (program top level, multi-expression bodies)."""

    exprs: tuple


@dataclass(eq=False)
class Begin(Seq):
    """Explicit (begin ...) form; decomposes like Seq under its own rule name."""


@dataclass(eq=False)
class App(Expr):
    operator: Expr
    operands: tuple


### datums (intermediate reader layer)

@dataclass
class _ListDatum:
    items: list
    tail: object  # datum after a dot, or None
    span: Span


@dataclass
class _QuoteDatum:
    inner: object
    span: Span


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def slice(self, span: Span) -> str:
        return self.source[span.start_offset:span.end_offset]

    ## datum layer

    def read_datum(self):
        if self.at_end():
            raise ReadError("unexpected end of input", _eof_span(self.source))
        token = self.next()
        if token.kind == LPAREN:
            return self._read_list(token)
        if token.kind == RPAREN:
            raise ReadError("unexpected )", token.span)
        if token.kind == QUOTE:
            inner = self.read_datum()
            return _QuoteDatum(inner, token.span.merge(_datum_span(inner)))
        if token.kind == SYMBOL and token.text == ".":
            raise ReadError("unexpected .", token.span)
        return token

    def _read_list(self, open_token: Token) -> _ListDatum:
        items = []
        tail = None
        while True:
            if self.at_end():
                raise ReadError("unbalanced parentheses", open_token.span)
            token = self.peek()
            if token.kind == RPAREN:
                close = self.next()
                return _ListDatum(items, tail, open_token.span.merge(close.span))
            if token.kind == SYMBOL and token.text == "." and tail is None:
                if not items:
                    raise ReadError("unexpected .", token.span)
                self.next()
                tail = self.read_datum()
                if self.at_end() or self.peek().kind != RPAREN:
                    raise ReadError("expected ) after dotted tail", token.span)
                continue
            if tail is not None:
                raise ReadError("more than one datum after .", token.span)
            items.append(self.read_datum())

    ## expression layer

    def lower(self, datum) -> Expr:
        if isinstance(datum, Token):
            return self._lower_atom(datum)
        if isinstance(datum, _QuoteDatum):
            expr = self.desugar_quote(datum.inner)
            expr.span = datum.span
            expr.text = self.slice(datum.span)
            return expr
        assert isinstance(datum, _ListDatum)
        if datum.tail is not None:
            raise ReadError("dotted list is only valid inside quote", datum.span)
        if not datum.items:
            raise ReadError("empty application ()", datum.span)
        head = datum.items[0]
        if isinstance(head, Token) and head.kind == SYMBOL and head.text in RESERVED_WORDS:
            return self._lower_special(head.text, datum)
        operator = self.lower(head)
        operands = tuple(self.lower(item) for item in datum.items[1:])
        return App(datum.span, self.slice(datum.span), operator, operands)

    def _lower_atom(self, token: Token) -> Expr:
        if token.kind == NUMBER:
            return NumberLit(token.span, token.text, _number_value(token))
        if token.kind == STRING:
            return StringLit(token.span, token.text, _string_value(token))
        if token.kind == BOOLEAN:
            return BoolLit(token.span, token.text, token.text == "#t")
        if token.kind == SYMBOL:
            if token.text in RESERVED_WORDS:
                raise ReadError(f"{token.text} is a reserved word", token.span)
            return Var(token.span, token.text, token.text)
        raise ReadError(f"unexpected token {token.text}", token.span)

    def _lower_special(self, keyword: str, datum: _ListDatum) -> Expr:
        items = datum.items
        span = datum.span
        text = self.slice(span)
        if keyword == "define":
            if len(items) >= 2 and isinstance(items[1], _ListDatum):
                # (define (f p...) body...) => (define f (lambda (p...) body...))
                header = items[1]
                if header.tail is not None or not header.items:
                    raise ReadError("malformed procedure define header", header.span)
                name = self._param_name(header.items[0])
                params = tuple(self._param_name(p) for p in header.items[1:])
                _check_distinct(params, header.span)
                if len(items) < 3:
                    raise ReadError("define needs a body", span)
                body = tuple(self.lower(item) for item in items[2:])
                lam = self._make_lambda(params, body, header.span.merge(body[-1].span))
                return Define(span, text, name, lam)
            if len(items) != 3:
                raise ReadError("define takes a name and one expression", span)
            name = self._param_name(items[1])
            return Define(span, text, name, self.lower(items[2]))
        if keyword == "set!":
            if len(items) != 3:
                raise ReadError("set! takes a name and one expression", span)
            name = self._param_name(items[1])
            return SetBang(span, text, name, self.lower(items[2]))
        if keyword == "lambda":
            if len(items) < 3:
                raise ReadError("lambda takes a parameter list and a body", span)
            if not isinstance(items[1], _ListDatum) or items[1].tail is not None:
                raise ReadError("lambda parameters must be a simple list of names", _datum_span(items[1]))
            params = tuple(self._param_name(p) for p in items[1].items)
            _check_distinct(params, items[1].span)
            body = tuple(self.lower(item) for item in items[2:])
            lam = self._make_lambda(params, body, span)
            lam.text = text
            return lam
        if keyword == "if":
            if len(items) not in (3, 4):
                raise ReadError("if takes a test, a consequent, and an optional alternative", span)
            test = self.lower(items[1])
            consequent = self.lower(items[2])
            if len(items) == 4:
                return If(span, text, test, consequent, self.lower(items[3]))
            alternative = UnspecifiedLit(span, "#!unspecified")
            return If(span, text, test, consequent, alternative, one_armed=True)
        if keyword == "begin":
            if len(items) < 2:
                raise ReadError("empty (begin)", span)
            exprs = tuple(self.lower(item) for item in items[1:])
            return Begin(span, text, exprs)
        if keyword == "quote":
            if len(items) != 2:
                raise ReadError("quote takes exactly one datum", span)
            expr = self.desugar_quote(items[1])
            expr.span = span
            expr.text = text
            return expr
        raise AssertionError(keyword)

    def _param_name(self, datum) -> str:
        if not isinstance(datum, Token) or datum.kind != SYMBOL or datum.text == ".":
            raise ReadError("expected a name", _datum_span(datum))
        if datum.text in RESERVED_WORDS:
            raise ReadError(f"{datum.text} is a reserved word", datum.span)
        return datum.text

    def _make_lambda(self, params, body, span) -> Lambda:
        if len(body) == 1:
            body_item = body[0]
        else:
            body_span = body[0].span.merge(body[-1].span)
            body_item = Seq(body_span, self.slice(body_span), body)
        lam = Lambda(span, "", params, body, body_item)
        lam.text = unparse(lam)
        return lam

    ## quote desugaring

    def desugar_quote(self, datum) -> Expr:
        """Rewrite a quoted datum into the core form the machine evaluates."""
        if isinstance(datum, Token):
            if datum.kind == NUMBER:
                return NumberLit(datum.span, datum.text, _number_value(datum))
            if datum.kind == STRING:
                return StringLit(datum.span, datum.text, _string_value(datum))
            if datum.kind == BOOLEAN:
                return BoolLit(datum.span, datum.text, datum.text == "#t")
            if datum.kind == SYMBOL:
                return SymbolLit(datum.span, datum.text, datum.text)
            raise ReadError(f"unexpected token {datum.text}", datum.span)
        if isinstance(datum, _QuoteDatum):
            # 'd inside quoted data is the two-element list (quote d)
            quote_sym = SymbolLit(datum.span, "quote", "quote")
            inner = self.desugar_quote(datum.inner)
            items = (quote_sym, inner)
            return App(datum.span, self.slice(datum.span),
                       Var(datum.span, "list", "list"), items)
        assert isinstance(datum, _ListDatum)
        elements = [self.desugar_quote(item) for item in datum.items]
        if datum.tail is None:
            operator = Var(datum.span, "list", "list")
            return App(datum.span, self.slice(datum.span), operator, tuple(elements))
        result = self.desugar_quote(datum.tail)
        for element in reversed(elements):
            span = element.span.merge(result.span)
            app = App(span, "", Var(element.span, "cons", "cons"), (element, result))
            app.text = unparse(app)
            result = app
        result.span = datum.span
        result.text = self.slice(datum.span)
        return result


def _datum_span(datum) -> Span:
    return datum.span


def _eof_span(source: str) -> Span:
    lines = source.split("\n")
    return Span(len(source), len(source), len(lines), len(lines[-1]) + 1,
                len(lines), len(lines[-1]) + 1)


def _check_distinct(params, span):
    if len(set(params)) != len(params):
        raise ReadError("duplicate parameter names", span)


def parse_program(source: str) -> list[Expr]:
    """Parse a whole program into a list of desugared core expressions."""
    parser = _Parser(source)
    program = []
    while not parser.at_end():
        program.append(parser.lower(parser.read_datum()))
    return program


def parse_expr(source: str) -> Expr:
    """Parse exactly one expression (helper for tests and tools)."""
    program = parse_program(source)
    if len(program) != 1:
        raise ReadError("expected exactly one expression", _eof_span(source))
    return program[0]


### unparsing

def _format_number(value) -> str:
    if isinstance(value, int):
        return str(value)
    if value != value:
        return "+nan.0"
    if value == float("inf"):
        return "+inf.0"
    if value == float("-inf"):
        return "-inf.0"
    return repr(value)


def _format_string(value: str) -> str:
    out = ['"']
    escapes = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
    for ch in value:
        out.append(escapes.get(ch, ch))
    out.append('"')
    return "".join(out)


def unparse(expr: Expr) -> str:
    """Render a core expression back to surface syntax that reparses identically."""
    if isinstance(expr, NumberLit):
        return _format_number(expr.value)
    if isinstance(expr, StringLit):
        return _format_string(expr.value)
    if isinstance(expr, BoolLit):
        return "#t" if expr.value else "#f"
    if isinstance(expr, SymbolLit):
        return f"'{expr.name}"
    if isinstance(expr, UnspecifiedLit):
        return "#!unspecified"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Lambda):
        params = " ".join(expr.params)
        body = " ".join(unparse(e) for e in expr.body)
        return f"(lambda ({params}) {body})"
    if isinstance(expr, Define):
        return f"(define {expr.name} {unparse(expr.value)})"
    if isinstance(expr, SetBang):
        return f"(set! {expr.name} {unparse(expr.value)})"
    if isinstance(expr, If):
        if expr.one_armed:
            return f"(if {unparse(expr.test)} {unparse(expr.consequent)})"
        return f"(if {unparse(expr.test)} {unparse(expr.consequent)} {unparse(expr.alternative)})"
    if isinstance(expr, Begin):
        return f"(begin {' '.join(unparse(e) for e in expr.exprs)})"
    if isinstance(expr, Seq):
        return " ".join(unparse(e) for e in expr.exprs)
    if isinstance(expr, App):
        parts = [unparse(expr.operator)] + [unparse(o) for o in expr.operands]
        return f"({' '.join(parts)})"
    raise TypeError(f"cannot unparse {expr!r}")


def unparse_program(program: list[Expr]) -> str:
    return "\n".join(unparse(expr) for expr in program)


def same_structure(a: Expr, b: Expr) -> bool:
    """Structural equality ignoring spans and display text."""
    if type(a) is not type(b):
        return False
    if isinstance(a, (NumberLit, StringLit, BoolLit)):
        return a.value == b.value and type(a.value) is type(b.value)
    if isinstance(a, SymbolLit):
        return a.name == b.name
    if isinstance(a, UnspecifiedLit):
        return True
    if isinstance(a, Var):
        return a.name == b.name
    if isinstance(a, Lambda):
        return (a.params == b.params and len(a.body) == len(b.body)
                and all(same_structure(x, y) for x, y in zip(a.body, b.body)))
    if isinstance(a, (Define, SetBang)):
        return a.name == b.name and same_structure(a.value, b.value)
    if isinstance(a, If):
        return (a.one_armed == b.one_armed
                and same_structure(a.test, b.test)
                and same_structure(a.consequent, b.consequent)
                and same_structure(a.alternative, b.alternative))
    if isinstance(a, Seq):
        return (len(a.exprs) == len(b.exprs)
                and all(same_structure(x, y) for x, y in zip(a.exprs, b.exprs)))
    if isinstance(a, App):
        return (same_structure(a.operator, b.operator)
                and len(a.operands) == len(b.operands)
                and all(same_structure(x, y) for x, y in zip(a.operands, b.operands)))
    raise TypeError(f"cannot compare {a!r}")
