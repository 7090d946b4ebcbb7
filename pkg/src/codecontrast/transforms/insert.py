"""Dead-code insertion and line subsampling."""

from __future__ import annotations

import random

from ..syntax import nodes as N
from ..syntax.scope import analyze
from .naming import RESERVED, word_name

_COMMENTS = (
    "TODO: revisit", "helper", "check bounds", "fast path", "see above",
    "NOTE: keep in sync", "handle edge case", "compute result", "cleanup later",
    "loop over items", "early exit", "initialize state",
)


def _literal(rng: random.Random):
    r = rng.random()
    if r < 0.4:
        return N.NumberLit(float(rng.randint(0, 99)))
    if r < 0.7:
        return N.StringLit(rng.choice(("", "x", "tmp", "ok", "none")))
    if r < 0.85:
        return N.BoolLit(rng.random() < 0.5)
    return N.NullLit()


def _statement_lists(program: N.Program) -> list:
    """Statement lists that sit inside some function body."""
    lists = []
    stack = [(program, False)]
    while stack:
        n, in_fn = stack.pop()
        t = type(n)
        if t is N.Block and in_fn:
            lists.append(n.body)
        inner = in_fn or t in N.FUNCTIONS
        stack.extend((c, inner) for c in N.children(n))
    return lists


def insert_dead_code(program: N.Program, rng: random.Random) -> None:
    """Insert 1 to 3 comments or unused declarations at random positions."""
    lists = _statement_lists(program) or [program.body]
    taken = set(RESERVED) | analyze(program).names_in_use()
    for _ in range(rng.randint(1, 3)):
        target = rng.choice(lists)
        pos = rng.randint(0, len(target))
        if rng.random() < 0.5:
            text = rng.choice(_COMMENTS)
            block = rng.random() < 0.3
            stmt = N.Comment(f" {text} " if block else f" {text}", block)
        else:
            name = word_name(rng)
            while name in taken:
                name = word_name(rng)
            taken.add(name)
            kind = rng.choice(("var", "let", "const"))
            stmt = N.VarDecl(kind, [N.Declarator(N.Identifier(name), _literal(rng))])
        target.insert(pos, stmt)


def subsample_lines(program: N.Program, rng: random.Random, keep: float = 0.9) -> None:
    """Keep each statement of every top-level function body with probability ``keep``."""
    for s in program.body:
        if type(s) is N.FunctionDecl:
            s.body.body = [x for x in s.body.body if rng.random() < keep]
