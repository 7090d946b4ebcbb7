"""Lexical scope resolution.

Strict-mode rules: ``var`` and parameters live in the enclosing function
scope, ``let``/``const`` and nested function declarations are block scoped,
a named function expression binds its own name in a scope of its own.
Every Identifier ends up attached either to a :class:`Binding` or to the
free-name table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import UnsupportedSyntax
from . import nodes as N

BUILTIN_GLOBALS = frozenset({"Math", "console", "NaN", "Infinity", "arguments", "eval", "globalThis"})


@dataclass(eq=False)
class Scope:
    kind: str  # program | function | block | for | fname
    parent: Optional["Scope"]
    node: object = None
    bindings: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    def __post_init__(self):
        if self.parent is not None:
            self.parent.children.append(self)

    def lookup(self, name: str) -> Optional["Binding"]:
        s = self
        while s is not None:
            b = s.bindings.get(name)
            if b is not None:
                return b
            s = s.parent
        return None

    def ancestors(self):
        s = self.parent
        while s is not None:
            yield s
            s = s.parent


@dataclass(eq=False)
class Binding:
    name: str
    kind: str  # param | var | let | const | function | fname
    scope: Scope
    decl: N.Identifier
    ids: list = field(default_factory=list)

    @property
    def references(self) -> list:
        """Identifier occurrences other than the declaring one."""
        return [i for i in self.ids if i is not self.decl]

    @property
    def top_level(self) -> bool:
        return self.scope.kind == "program"


class Analysis:
    def __init__(self, program: N.Program):
        self.program = program
        self.bindings: list[Binding] = []
        self.free: dict[str, list[N.Identifier]] = {}
        self.binding_of: dict[int, Binding] = {}
        self.root = Scope("program", None, program)
        self._program(program)

    # -- declaration ----------------------------------------------------------

    def _declare(self, scope: Scope, ident: N.Identifier, kind: str) -> Binding:
        if ident.name in scope.bindings:
            raise UnsupportedSyntax(f"redeclaration of {ident.name}")
        b = Binding(ident.name, kind, scope, ident, [ident])
        scope.bindings[ident.name] = b
        self.bindings.append(b)
        self.binding_of[id(ident)] = b
        return b

    def _hoist_vars(self, stmts: list, scope: Scope):
        for s in stmts:
            t = type(s)
            if t is N.VarDecl:
                if s.kind == "var":
                    for d in s.declarations:
                        self._declare(scope, d.id, "var")
            elif t is N.If:
                self._hoist_vars(s.consequent.body, scope)
                if s.alternate is not None:
                    self._hoist_vars([s.alternate], scope)
            elif t is N.While:
                self._hoist_vars(s.body.body, scope)
            elif t is N.For:
                if isinstance(s.init, N.VarDecl) and s.init.kind == "var":
                    for d in s.init.declarations:
                        self._declare(scope, d.id, "var")
                self._hoist_vars(s.body.body, scope)
            elif t is N.Block:
                self._hoist_vars(s.body, scope)

    def _declare_lexical(self, stmts: list, scope: Scope):
        for s in stmts:
            t = type(s)
            if t is N.VarDecl and s.kind != "var":
                for d in s.declarations:
                    self._declare(scope, d.id, s.kind)
            elif t is N.FunctionDecl:
                self._declare(scope, s.id, "function")

    # -- traversal ------------------------------------------------------------

    def _program(self, prog: N.Program):
        scope = self.root
        self._hoist_vars(prog.body, scope)
        self._declare_lexical(prog.body, scope)
        for s in prog.body:
            self._stmt(s, scope)

    def _function(self, fn, scope: Scope):
        if isinstance(fn, N.FunctionExpr) and fn.id is not None:
            scope = Scope("fname", scope, fn)
            self._declare(scope, fn.id, "fname")
        fscope = Scope("function", scope, fn)
        for p in fn.params:
            self._declare(fscope, p, "param")
        body = fn.body
        if isinstance(body, N.Block):
            self._hoist_vars(body.body, fscope)
            self._declare_lexical(body.body, fscope)
            for s in body.body:
                self._stmt(s, fscope)
        else:
            self._expr(body, fscope)

    def _block(self, block: N.Block, scope: Scope):
        inner = Scope("block", scope, block)
        self._declare_lexical(block.body, inner)
        for s in block.body:
            self._stmt(s, inner)

    def _stmt(self, s, scope: Scope):
        t = type(s)
        if t is N.ExprStmt:
            self._expr(s.expression, scope)
        elif t is N.VarDecl:
            for d in s.declarations:
                if s.kind == "var" and scope.lookup(d.id.name) is not self.binding_of.get(id(d.id)):
                    raise UnsupportedSyntax(f"var {d.id.name} shadowed by a lexical binding")
                if d.init is not None:
                    self._expr(d.init, scope)
        elif t is N.Return:
            if s.argument is not None:
                self._expr(s.argument, scope)
        elif t is N.If:
            self._expr(s.test, scope)
            self._block(s.consequent, scope)
            if isinstance(s.alternate, N.If):
                self._stmt(s.alternate, scope)
            elif s.alternate is not None:
                self._block(s.alternate, scope)
        elif t is N.While:
            self._expr(s.test, scope)
            self._block(s.body, scope)
        elif t is N.For:
            inner = scope
            init = s.init
            if isinstance(init, N.VarDecl) and init.kind != "var":
                inner = Scope("for", scope, s)
                for d in init.declarations:
                    self._declare(inner, d.id, init.kind)
            if isinstance(init, N.VarDecl):
                self._stmt(init, inner)
            elif init is not None:
                self._expr(init, inner)
            if s.test is not None:
                self._expr(s.test, inner)
            if s.update is not None:
                self._expr(s.update, inner)
            self._block(s.body, inner)
        elif t is N.Block:
            self._block(s, scope)
        elif t is N.FunctionDecl:
            self._function(s, scope)
        elif t is N.Comment:
            pass
        else:
            raise TypeError(f"unexpected statement {s!r}")

    def _expr(self, e, scope: Scope):
        stack = [e]
        while stack:
            e = stack.pop()
            t = type(e)
            if t is N.Identifier:
                b = scope.lookup(e.name)
                if b is None:
                    self.free.setdefault(e.name, []).append(e)
                else:
                    b.ids.append(e)
                    self.binding_of[id(e)] = b
            elif t is N.FunctionExpr or t is N.ArrowFunction:
                self._function(e, scope)
            elif t is N.Member:
                stack.append(e.object)
                if e.computed:
                    stack.append(e.property)
            elif t is N.Property:
                stack.append(e.value)
            else:
                stack.extend(N.children(e))

    # -- queries ----------------------------------------------------------------

    def resolve(self, ident: N.Identifier) -> Optional[Binding]:
        """Binding for an Identifier of this program, or None when free."""
        return self.binding_of.get(id(ident))

    def scopes(self):
        """All scopes in pre-order."""
        stack = [self.root]
        while stack:
            s = stack.pop()
            yield s
            stack.extend(reversed(s.children))

    def names_in_use(self) -> set:
        return {b.name for b in self.bindings} | set(self.free)


def analyze(program: N.Program) -> Analysis:
    return Analysis(program)
