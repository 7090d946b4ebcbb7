"""AST node classes.

Nodes are plain mutable dataclasses with structural equality. Public
transforms never mutate their input; they work on a :func:`clone`.
Every binding site and every reference is an :class:`Identifier`, so a
rename is a matter of rewriting ``Identifier.name`` on the right nodes.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class Node:
    __slots__ = ()
    _children: tuple[str, ...] = ()


# -- statements -------------------------------------------------------------


@dataclass(slots=True)
class Program(Node):
    body: list
    _children = ("body",)


@dataclass(slots=True)
class Identifier(Node):
    name: str


@dataclass(slots=True)
class Block(Node):
    body: list
    _children = ("body",)


@dataclass(slots=True)
class FunctionDecl(Node):
    id: Identifier
    params: list
    body: Block
    _children = ("id", "params", "body")


@dataclass(slots=True)
class Declarator(Node):
    id: Identifier
    init: Optional[Node] = None
    _children = ("id", "init")


@dataclass(slots=True)
class VarDecl(Node):
    kind: str  # var | let | const
    declarations: list
    _children = ("declarations",)


@dataclass(slots=True)
class If(Node):
    test: Node
    consequent: Block
    alternate: Optional[Union[Block, "If"]] = None
    _children = ("test", "consequent", "alternate")


@dataclass(slots=True)
class While(Node):
    test: Node
    body: Block
    _children = ("test", "body")


@dataclass(slots=True)
class For(Node):
    init: Optional[Node]
    test: Optional[Node]
    update: Optional[Node]
    body: Block
    _children = ("init", "test", "update", "body")


@dataclass(slots=True)
class Return(Node):
    argument: Optional[Node] = None
    _children = ("argument",)


@dataclass(slots=True)
class ExprStmt(Node):
    expression: Node
    _children = ("expression",)


@dataclass(slots=True)
class Comment(Node):
    text: str
    block: bool = False


# -- expressions ------------------------------------------------------------


@dataclass(slots=True)
class NumberLit(Node):
    value: float


@dataclass(slots=True)
class StringLit(Node):
    value: str


@dataclass(slots=True)
class BoolLit(Node):
    value: bool


@dataclass(slots=True)
class NullLit(Node):
    pass


@dataclass(slots=True)
class UndefinedLit(Node):
    pass


@dataclass(slots=True)
class ArrayLit(Node):
    elements: list
    _children = ("elements",)


@dataclass(slots=True)
class Property(Node):
    key: str
    value: Node
    _children = ("value",)


@dataclass(slots=True)
class ObjectLit(Node):
    properties: list
    _children = ("properties",)


@dataclass(slots=True)
class Binary(Node):
    op: str
    left: Node
    right: Node
    _children = ("left", "right")


@dataclass(slots=True)
class Unary(Node):
    op: str  # ! - + typeof void
    argument: Node
    _children = ("argument",)


@dataclass(slots=True)
class Update(Node):
    op: str  # ++ --
    prefix: bool
    argument: Node
    _children = ("argument",)


@dataclass(slots=True)
class Call(Node):
    callee: Node
    arguments: list
    _children = ("callee", "arguments")


@dataclass(slots=True)
class Member(Node):
    object: Node
    property: Union[str, Node]
    computed: bool = False
    _children = ("object", "property")


@dataclass(slots=True)
class Assign(Node):
    op: str  # = += -= *= /= %=
    target: Node
    value: Node
    _children = ("target", "value")


@dataclass(slots=True)
class FunctionExpr(Node):
    id: Optional[Identifier]
    params: list
    body: Block
    _children = ("id", "params", "body")


@dataclass(slots=True)
class ArrowFunction(Node):
    params: list
    body: Node  # Block or expression
    _children = ("params", "body")


LITERALS = (NumberLit, StringLit, BoolLit, NullLit, UndefinedLit)
FUNCTIONS = (FunctionDecl, FunctionExpr, ArrowFunction)
STATEMENTS = (FunctionDecl, VarDecl, If, While, For, Return, Block, ExprStmt, Comment)


def clone(node):
    """Deep copy of a node (or list of nodes); much cheaper than ``copy.deepcopy``."""
    if isinstance(node, list):
        return [clone(x) for x in node]
    if not isinstance(node, Node):
        return node
    cls = type(node)
    new = object.__new__(cls)
    for name in cls.__slots__:
        v = getattr(node, name)
        if isinstance(v, (Node, list)):
            v = clone(v)
        setattr(new, name, v)
    return new


def children(node: Node) -> Iterator[Node]:
    for name in node._children:
        v = getattr(node, name)
        if isinstance(v, list):
            yield from v
        elif isinstance(v, Node):
            yield v


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    stack = [node]
    pop, push = stack.pop, stack.extend
    while stack:
        n = pop()
        yield n
        push(reversed(list(children(n))))


def strip_comments(node):
    """Copy of ``node`` with every Comment statement removed."""
    node = clone(node)
    for n in walk(node):
        if isinstance(n, (Program, Block)):
            n.body = [s for s in n.body if not isinstance(s, Comment)]
    return node


def entry_function(program: Program) -> Optional[FunctionDecl]:
    for s in program.body:
        if isinstance(s, FunctionDecl):
            return s
    return None


@contextmanager
def recursion_headroom(limit: int = 8000):
    """Temporarily allow deeper Python recursion for tree walks over nested code."""
    old = sys.getrecursionlimit()
    if old < limit:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)
