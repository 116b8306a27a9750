"""Seeded random generator of pure-fragment programs for differential tests.

Generates type-correct expressions (no mutation, no call/cc, no unbound
names, no division), so every generated program terminates and yields the
same value under the machine and the big-step oracle.
"""

from __future__ import annotations

import random

INT = "int"
BOOL = "bool"
LIST = "list"  # proper list of ints
STR = "str"

_WORDS = ["alpha", "beta", "gamma", "delta", "iota", "kappa"]


class _Gen:
    def __init__(self, rng: random.Random, max_depth: int):
        self.rng = rng
        self.max_depth = max_depth
        self.scope: list[tuple[str, str]] = []  # (name, type)
        self.counter = 0

    def fresh_name(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    def vars_of(self, want: str) -> list[str]:
        return [name for name, t in self.scope if t == want]

    def gen(self, want: str, depth: int) -> str:
        rng = self.rng
        atoms = self.vars_of(want)
        if depth >= self.max_depth or rng.random() < 0.25:
            if atoms and rng.random() < 0.5:
                return rng.choice(atoms)
            return self.atom(want)
        makers = {INT: self.int_expr, BOOL: self.bool_expr,
                  LIST: self.list_expr, STR: self.str_expr}
        return makers[want](depth)

    def atom(self, want: str) -> str:
        rng = self.rng
        if want == INT:
            return str(rng.randint(-20, 20))
        if want == BOOL:
            return rng.choice(["#t", "#f"])
        if want == LIST:
            items = [str(rng.randint(0, 9)) for _ in range(rng.randint(1, 4))]
            if rng.random() < 0.5:
                return f"'({' '.join(items)})"
            return f"(list {' '.join(items)})"
        return '"%s"' % rng.choice(_WORDS)

    def int_expr(self, depth: int) -> str:
        rng = self.rng
        d = depth + 1
        choice = rng.randrange(8)
        if choice == 0:
            op = rng.choice(["+", "-", "*"])
            n = rng.randint(1 if op == "-" else 2, 3)
            args = " ".join(self.gen(INT, d) for _ in range(n))
            return f"({op} {args})"
        if choice == 1:
            return f"(if {self.gen(BOOL, d)} {self.gen(INT, d)} {self.gen(INT, d)})"
        if choice == 2:
            return f"(car {self.nonempty_list(d)})"
        if choice == 3:
            return f"(length {self.gen(LIST, d)})"
        if choice == 4:
            return self.let_like(INT, d)
        if choice == 5:
            body = " ".join(self.gen(t, d) for t in (BOOL, INT))
            return f"(begin {body})"
        if choice == 6:
            return f"(abs {self.gen(INT, d)})"
        return f"({rng.choice(['min', 'max'])} {self.gen(INT, d)} {self.gen(INT, d)})"

    def bool_expr(self, depth: int) -> str:
        rng = self.rng
        d = depth + 1
        choice = rng.randrange(6)
        if choice == 0:
            op = rng.choice(["=", "<", ">", "<=", ">="])
            return f"({op} {self.gen(INT, d)} {self.gen(INT, d)})"
        if choice == 1:
            return f"(not {self.gen(BOOL, d)})"
        if choice == 2:
            return f"(null? (cdr {self.nonempty_list(d)}))"
        if choice == 3:
            return f"(if {self.gen(BOOL, d)} {self.gen(BOOL, d)} {self.gen(BOOL, d)})"
        if choice == 4:
            t = rng.choice([INT, LIST, STR])
            return f"(equal? {self.gen(t, d)} {self.gen(t, d)})"
        return f"(pair? {self.gen(LIST, d)})"

    def list_expr(self, depth: int) -> str:
        rng = self.rng
        d = depth + 1
        choice = rng.randrange(5)
        if choice == 0:
            n = rng.randint(1, 3)
            return f"(list {' '.join(self.gen(INT, d) for _ in range(n))})"
        if choice == 1:
            return f"(cons {self.gen(INT, d)} {self.gen(LIST, d)})"
        if choice == 2:
            return f"(cdr {self.nonempty_list(d)})"
        if choice == 3:
            return f"(append {self.gen(LIST, d)} {self.gen(LIST, d)})"
        return self.let_like(LIST, d)

    def str_expr(self, depth: int) -> str:
        d = depth + 1
        if self.rng.random() < 0.5:
            return f"(if {self.gen(BOOL, d)} {self.atom(STR)} {self.atom(STR)})"
        return self.atom(STR)

    def nonempty_list(self, depth: int) -> str:
        # cons guarantees at least one element whatever the tail turns out to be
        return f"(cons {self.gen(INT, depth)} {self.gen(LIST, depth)})"

    def let_like(self, want: str, depth: int) -> str:
        # ((lambda (x ...) body) arg ...): the only binder in the pure fragment
        rng = self.rng
        n = rng.randint(1, 2)
        names = [self.fresh_name() for _ in range(n)]
        types = [rng.choice([INT, BOOL, LIST]) for _ in range(n)]
        args = [self.gen(t, depth) for t in types]
        self.scope.extend(zip(names, types))
        body = self.gen(want, depth)
        del self.scope[-n:]
        return f"((lambda ({' '.join(names)}) {body}) {' '.join(args)})"


def gen_program(seed: int, max_depth: int = 5) -> str:
    """One deterministic pure-fragment program per seed."""
    rng = random.Random(seed)
    gen = _Gen(rng, max_depth)
    want = rng.choice([INT, BOOL, LIST, INT, BOOL])
    return gen.gen(want, 0)
