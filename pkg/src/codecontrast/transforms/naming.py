"""Scope-safe renaming of local bindings, shared by VR and IM."""

from __future__ import annotations

import random
from typing import Callable, Iterator

from ..syntax import nodes as N
from ..syntax.lexer import KEYWORDS
from ..syntax.scope import BUILTIN_GLOBALS, analyze

RESERVED = frozenset(KEYWORDS) | BUILTIN_GLOBALS | {"undefined", "NaN", "Infinity", "let", "static", "yield", "await"}

MANGLE_ORDER = "etnrlosiaucfpdhmgbyvwxkjqz"

_WORDS = (
    "value item count index total result node list data entry key size width height "
    "left right start end first last next prev buffer cache queue stack token name text "
    "score limit offset delta step acc temp flag state mode level depth row col part "
    "chunk slot field record input output source target sum max min mid head tail pair"
).split()


def mangled_names() -> Iterator[str]:
    """Shortest-first names: single letters in frequency order, then uppercase, then pairs."""
    singles = MANGLE_ORDER + MANGLE_ORDER.upper()
    yield from singles
    for a in singles:
        for b in singles + "0123456789":
            yield a + b
    n = 0
    while True:
        yield f"_{n}"
        n += 1


def word_name(rng: random.Random) -> str:
    parts = [rng.choice(_WORDS) for _ in range(rng.randint(1, 3))]
    return parts[0] + "".join(p.capitalize() for p in parts[1:])


def rename_locals(program: N.Program, choose: Callable[[set], str]) -> None:
    """Rename every non-top-level binding in place.

    ``choose(taken)`` returns a fresh name not in ``taken``. A binding must
    avoid reserved words, free names, top-level names and every new name of
    an enclosing scope; sibling scopes may reuse names.
    """
    an = analyze(program)
    base = set(RESERVED) | set(an.free) | set(an.root.bindings)
    new_names: dict[int, set] = {id(an.root): set()}
    for scope in an.scopes():
        if scope is an.root:
            continue
        taken_here = set(new_names[id(scope.parent)])
        for b in scope.bindings.values():
            name = choose(base | taken_here)
            taken_here.add(name)
            for ident in b.ids:
                ident.name = name
        new_names[id(scope)] = taken_here


def mangle(program: N.Program, rng=None) -> None:
    def choose(taken):
        for name in mangled_names():
            if name not in taken:
                return name
        raise AssertionError("unreachable")

    rename_locals(program, choose)


def random_rename(program: N.Program, rng: random.Random) -> None:
    def choose(taken):
        while True:
            name = word_name(rng)
            if name not in taken:
                return name

    rename_locals(program, choose)
