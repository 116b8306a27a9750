"""Reader tests: tokens, spans, desugarings, errors, and round-trips."""

import pytest

from cse_machine import reader
from cse_machine.errors import ReadError
from cse_machine.reader import (
    App,
    Begin,
    BoolLit,
    Define,
    If,
    Lambda,
    NumberLit,
    SetBang,
    StringLit,
    SymbolLit,
    UnspecifiedLit,
    Var,
    parse_expr,
    parse_program,
    same_structure,
    tokenize,
    unparse,
)

import proggen


### tokenizer

def kinds(source):
    return [t.kind for t in tokenize(source)]


def test_tokenize_simple_call():
    tokens = tokenize("(* 2 3)")
    assert [(t.kind, t.text) for t in tokens] == [
        (reader.LPAREN, "("), (reader.SYMBOL, "*"), (reader.NUMBER, "2"),
        (reader.NUMBER, "3"), (reader.RPAREN, ")"),
    ]


def test_tokenize_empty_input():
    assert tokenize("") == []


def test_tokenize_quote_shorthand_is_one_token():
    assert kinds("'(1 2)") == [reader.QUOTE, reader.LPAREN, reader.NUMBER,
                               reader.NUMBER, reader.RPAREN]


@pytest.mark.parametrize("source", [
    "(* 2 3)",
    "  (define (f x) ; comment\n  (* x x))",
    '"a string with \\" escape" symbol->name #t 3.25',
    "'(1 . 2) ; trailing comment",
])
def test_token_spans_reproduce_source(source):
    # lexeme slices plus skipped whitespace/comments reproduce the source
    tokens = tokenize(source)
    for token in tokens:
        assert source[token.span.start_offset:token.span.end_offset] == token.text
    rebuilt = []
    pos = 0
    for token in tokens:
        gap = source[pos:token.span.start_offset]
        assert all(ch.isspace() for ch in gap.split(";")[0])
        rebuilt.append(gap)
        rebuilt.append(token.text)
        pos = token.span.end_offset
    rebuilt.append(source[pos:])
    assert "".join(rebuilt) == source


def test_token_line_col_positions():
    tokens = tokenize("(a\n  b)")
    b = tokens[2]
    assert (b.span.start_line, b.span.start_col) == (2, 3)


def test_string_escapes():
    expr = parse_expr(r'"a\nb\t\"c\\"')
    assert isinstance(expr, StringLit)
    assert expr.value == 'a\nb\t"c\\'


def test_number_forms():
    assert parse_expr("42").value == 42
    assert parse_expr("-7").value == -7
    assert parse_expr("3.25").value == 3.25
    assert parse_expr(".5").value == 0.5
    assert parse_expr("1e3").value == 1000.0
    assert parse_expr("123456789012345678901234567890").value == 123456789012345678901234567890
    assert isinstance(parse_expr("42").value, int)
    assert isinstance(parse_expr("4.0").value, float)


def test_extended_identifiers():
    for name in ["set-car!", "string->symbol", "*", "/", "<", "=", "-x", "+foo", "..."]:
        expr = parse_expr(name)
        assert isinstance(expr, Var) and expr.name == name


@pytest.mark.parametrize("bad", ["1.2.3", "12ab", "-12x!", "1+"])
def test_malformed_numbers_rejected(bad):
    with pytest.raises(ReadError, match="malformed number"):
        tokenize(bad)


def test_unterminated_string():
    with pytest.raises(ReadError, match="unterminated string"):
        tokenize('"abc')


def test_unsupported_hash_syntax():
    with pytest.raises(ReadError, match="#"):
        tokenize("#true")


### parsing and desugaring

def test_procedure_define_desugars_to_lambda():
    expr = parse_expr("(define (square x) (* x x))")
    assert isinstance(expr, Define) and expr.name == "square"
    lam = expr.value
    assert isinstance(lam, Lambda) and lam.params == ("x",)
    app = lam.body[0]
    assert isinstance(app, App) and isinstance(app.operator, Var)
    assert app.operator.name == "*"


def test_procedure_define_equals_explicit_lambda():
    a = parse_expr("(define (f a b) e1 e2)")
    b = parse_expr("(define f (lambda (a b) e1 e2))")
    assert same_structure(a, b)


def test_quoted_list_becomes_list_application():
    expr = parse_expr("'(1 2 3 4)")
    assert isinstance(expr, App)
    assert isinstance(expr.operator, Var) and expr.operator.name == "list"
    assert [e.value for e in expr.operands] == [1, 2, 3, 4]
    assert expr.text == "'(1 2 3 4)"


def test_quote_long_form_matches_shorthand():
    assert same_structure(parse_expr("'(1 2)"), parse_expr("(quote (1 2))"))


def test_quoted_symbol():
    expr = parse_expr("'x")
    assert isinstance(expr, SymbolLit) and expr.name == "x"


def test_quoted_dotted_pair_becomes_cons():
    expr = parse_expr("'(1 . 2)")
    assert isinstance(expr, App) and expr.operator.name == "cons"
    assert [e.value for e in expr.operands] == [1, 2]


def test_quoted_improper_list_folds_cons():
    expr = parse_expr("'(1 2 . 3)")
    assert expr.operator.name == "cons"
    inner = expr.operands[1]
    assert inner.operator.name == "cons"
    assert [inner.operands[0].value, inner.operands[1].value] == [2, 3]


def test_nested_quote():
    expr = parse_expr("''x")
    assert isinstance(expr, App) and expr.operator.name == "list"
    assert isinstance(expr.operands[0], SymbolLit) and expr.operands[0].name == "quote"
    assert isinstance(expr.operands[1], SymbolLit) and expr.operands[1].name == "x"


def test_quoted_empty_list_is_nullary_list_call():
    expr = parse_expr("'()")
    assert isinstance(expr, App) and expr.operator.name == "list"
    assert expr.operands == ()


def test_quoted_atoms():
    assert parse_expr("'5").value == 5
    assert parse_expr("'#t").value is True
    assert parse_expr('\'"s"').value == "s"


def test_one_armed_if_gets_unspecified_alternative():
    expr = parse_expr("(if #t 1)")
    assert isinstance(expr, If) and expr.one_armed
    assert isinstance(expr.alternative, UnspecifiedLit)


def test_atom_program():
    program = parse_program("42")
    assert len(program) == 1 and isinstance(program[0], NumberLit)


def test_begin_parses():
    expr = parse_expr("(begin 1 2)")
    assert isinstance(expr, Begin) and len(expr.exprs) == 2


def test_set_bang():
    expr = parse_expr("(set! x 1)")
    assert isinstance(expr, SetBang) and expr.name == "x"


### errors

@pytest.mark.parametrize("bad, message", [
    ("(", "unbalanced"),
    ("(a))", "unexpected"),
    ("(begin)", "empty"),
    ("()", "empty application"),
    ("(define)", "define"),
    ("(define x)", "define"),
    ("(define x 1 2)", "define"),
    ("(define (f))", "body"),
    ("(define 3 4)", "name"),
    ("(set! x)", "set!"),
    ("(if 1)", "if"),
    ("(if 1 2 3 4)", "if"),
    ("(lambda (x))", "lambda"),
    ("(lambda x x)", "lambda parameters"),
    ("(lambda (x x) x)", "duplicate"),
    ("(lambda (a . b) a)", "lambda parameters"),
    ("(quote)", "quote"),
    ("(quote a b)", "quote"),
    ("(f 1 . 2)", "dotted"),
    (".", "unexpected ."),
    ("(1 . 2)", "dotted"),
    ("define", "reserved"),
    ("(define if 3)", "reserved"),
])
def test_parse_errors(bad, message):
    with pytest.raises(ReadError, match=message):
        parse_program(bad)


def test_errors_carry_spans():
    try:
        parse_program("(define)")
    except ReadError as error:
        assert error.span is not None
        assert error.span.start_line == 1 and error.span.start_col == 1
    else:
        pytest.fail("expected ReadError")


### invariants

def _walk(expr):
    yield expr
    for name in ("value", "test", "consequent", "alternative", "operator"):
        child = getattr(expr, name, None)
        if isinstance(child, reader.Expr):
            yield from _walk(child)
    for name in ("body", "exprs", "operands"):
        children = getattr(expr, name, None)
        if isinstance(children, tuple):
            for child in children:
                yield from _walk(child)


def _spans_nested(expr):
    for node in _walk(expr):
        for child in _walk(node):
            if child is node:
                continue
            assert child.span.start_offset >= node.span.start_offset
            assert child.span.end_offset <= node.span.end_offset


def test_child_spans_lie_within_parent_spans(corpus):
    for source in corpus:
        for expr in parse_program(source):
            _spans_nested(expr)


def test_round_trip_corpus(corpus):
    for source in corpus:
        program = parse_program(source)
        again = parse_program(reader.unparse_program(program))
        assert len(program) == len(again)
        for a, b in zip(program, again):
            assert same_structure(a, b), source


def test_round_trip_generated_programs():
    for seed in range(200):
        source = proggen.gen_program(seed)
        program = parse_program(source)
        again = parse_program(reader.unparse_program(program))
        for a, b in zip(program, again):
            assert same_structure(a, b), source


def test_unparse_examples():
    assert unparse(parse_expr("(define (f x) (* x x))")) == "(define f (lambda (x) (* x x)))"
    assert unparse(parse_expr("'x")) == "'x"
    assert unparse(parse_expr("(if 1 2)")) == "(if 1 2)"
