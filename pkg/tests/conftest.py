import sys
from pathlib import Path

import pytest

# allow `import oracle` / `import proggen` from test modules
sys.path.insert(0, str(Path(__file__).parent))

FIGURE_SQUARE_APPLY = "((lambda (x) (* x x)) 4)"
FIGURE_DEFINE_SQUARE = "(define (square x) (* x x))"
FIGURE_IF_BRANCH = '(if (= 1 2) "1 == 2" "1 != 2")'
FIGURE_SECOND = "(define (second xs) (car (cdr xs))) (second '(1 2 3 4))"
FIGURE_EARLY_RETURN = '(call/cc (lambda (return) (return "early") "late"))'

ACCUMULATOR = """\
(define (make-acc) (define n 0) (lambda () (set! n (+ n 1)) n))
(define a (make-acc))
(define b (make-acc))
(list (a) (a) (b))
"""

FACT5 = "(define (fact n) (if (= n 1) 1 (* n (fact (- n 1))))) (fact 5)"

# terminating programs exercising every construct; shared by the property tests
CORPUS = [
    "(* 2 3)",
    "42",
    FIGURE_SQUARE_APPLY,
    FIGURE_DEFINE_SQUARE,
    FIGURE_IF_BRANCH,
    FIGURE_SECOND,
    FIGURE_EARLY_RETURN,
    ACCUMULATOR,
    FACT5,
    "(+ (* 2 3) (- 10 4))",
    "'(1 . 2)",
    "''nested",
    "(begin 1 2 3)",
    "(if #f 1)",
    '(display "hi") (newline) (display (list 1 2))',
    "(define p (cons 1 2)) (set-car! p 99) p",
    "(+ 1 (call/cc (lambda (k) (k 10))))",
    "(+ 1 (call/cc (lambda (k) 10)))",
    "(define (compose f g) (lambda (x) (f (g x))))"
    " ((compose car cdr) '(1 2 3))",
    "(define (map1 f xs) (if (null? xs) '() (cons (f (car xs)) (map1 f (cdr xs)))))"
    " (map1 (lambda (x) (* x x)) '(1 2 3 4))",
]

PURE_CORPUS = [p for p in CORPUS
               if "set" not in p and "call/cc" not in p and "display" not in p]


@pytest.fixture(scope="session")
def corpus():
    return list(CORPUS)


@pytest.fixture(scope="session")
def pure_corpus():
    return list(PURE_CORPUS)
