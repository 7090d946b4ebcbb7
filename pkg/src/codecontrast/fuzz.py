"""Random well-scoped programs in the supported subset.

Generated programs always terminate (loops have constant trip counts,
there is no recursion) and exercise every construct the transforms touch:
closures over loop variables, constant subexpressions, dead branches,
unused bindings, shadowing parameters and comments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .syntax import nodes as N
from .syntax.printer import PrintStyle, print_ast

_STEMS = ("val", "acc", "idx", "buf", "tmp", "res", "cnt", "arr", "key", "obj", "str", "num")
_STRINGS = ("", "a", "ab", "hello", "x y", "42", "-1")
_BIN_OPS = ("+", "-", "*", "/", "%", "<", ">", "<=", ">=", "===", "!==", "==", "!=", "&&", "||")
_ASSIGN_OPS = ("=", "+=", "-=", "*=")


@dataclass
class _Var:
    name: str
    mutable: bool
    func_arity: int = -1  # >= 0 for callable bindings


@dataclass
class _Ctx:
    visible: list = field(default_factory=list)
    depth: int = 0
    loop_depth: int = 0


class ProgramGenerator:
    def __init__(self, rng: random.Random, max_depth: int = 3):
        self.rng = rng
        self.max_depth = max_depth
        self.counter = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"{self.rng.choice(_STEMS)}{self.counter}"

    # -- expressions ---------------------------------------------------------

    def literal(self):
        r = self.rng.random()
        if r < 0.45:
            v = float(self.rng.randint(0, 20))
            return N.Unary("-", N.NumberLit(v)) if self.rng.random() < 0.15 and v else N.NumberLit(v)
        if r < 0.55:
            return N.NumberLit(self.rng.choice((0.5, 1.25, 2.75, 1e-3)))
        if r < 0.75:
            return N.StringLit(self.rng.choice(_STRINGS))
        if r < 0.88:
            return N.BoolLit(self.rng.random() < 0.5)
        if r < 0.94:
            return N.NullLit()
        return N.UndefinedLit()

    def expr(self, ctx: _Ctx, depth: int = 0):
        rng = self.rng
        readable = [v for v in ctx.visible if v.func_arity < 0]
        if depth >= 3 or rng.random() < 0.25 + 0.15 * depth:
            if readable and rng.random() < 0.7:
                return N.Identifier(rng.choice(readable).name)
            return self.literal()
        r = rng.random()
        if r < 0.35:
            return N.Binary(rng.choice(_BIN_OPS), self.expr(ctx, depth + 1), self.expr(ctx, depth + 1))
        if r < 0.42:
            # constant subexpression, food for folding
            return N.Binary(rng.choice(("+", "*", "-")), N.NumberLit(float(rng.randint(1, 9))),
                            N.NumberLit(float(rng.randint(1, 9))))
        if r < 0.5:
            return N.Unary(rng.choice(("!", "-", "+", "typeof", "void")), self.expr(ctx, depth + 1))
        if r < 0.57:
            return N.Member(self.expr(ctx, depth + 1), "length")
        if r < 0.62:
            return N.Member(self.expr(ctx, depth + 1), self.expr(ctx, depth + 1), True)
        if r < 0.7:
            fn = rng.choice(("floor", "max", "min", "abs"))
            n = 1 if fn in ("floor", "abs") else 2
            return N.Call(N.Member(N.Identifier("Math"), fn), [self.expr(ctx, depth + 1) for _ in range(n)])
        if r < 0.76:
            return N.ArrayLit([self.expr(ctx, depth + 1) for _ in range(rng.randint(0, 3))])
        if r < 0.8:
            key = rng.choice(("a", "b", "c"))
            obj = N.ObjectLit([N.Property(k, self.expr(ctx, depth + 1)) for k in ("a", "b")])
            return N.Member(obj, key)
        callables = [v for v in ctx.visible if v.func_arity >= 0]
        if r < 0.9 and callables:
            f = rng.choice(callables)
            return N.Call(N.Identifier(f.name), [self.expr(ctx, depth + 1) for _ in range(f.func_arity)])
        if r < 0.95:
            # immediately-invoked arrow with a shadowing parameter
            shadow = rng.choice(readable).name if readable and rng.random() < 0.5 else self.fresh()
            inner = _Ctx(ctx.visible + [_Var(shadow, True)], ctx.depth + 1)
            return N.Call(N.ArrowFunction([N.Identifier(shadow)], self.expr(inner, depth + 1)),
                          [self.expr(ctx, depth + 1)])
        return self.literal()

    # -- statements --------------------------------------------------------------

    def block(self, ctx: _Ctx, n: int) -> list:
        inner = _Ctx(list(ctx.visible), ctx.depth + 1, ctx.loop_depth)
        return self.statements(inner, n)

    def statements(self, ctx: _Ctx, n: int) -> list:
        out = []
        for _ in range(n):
            out.extend(self.statement(ctx))
        return out

    def statement(self, ctx: _Ctx) -> list:
        rng = self.rng
        deep = ctx.depth >= self.max_depth
        r = rng.random()
        mutable = [v for v in ctx.visible if v.mutable and v.func_arity < 0]
        if r < 0.2:
            kind = rng.choice(("var", "let", "const"))
            decls = []
            for _ in range(rng.choice((1, 1, 2))):
                decls.append(N.Declarator(N.Identifier(self.fresh()), self.expr(ctx)))
            for d in decls:
                ctx.visible.append(_Var(d.id.name, kind != "const"))
            return [N.VarDecl(kind, decls)]
        if r < 0.32 and mutable:
            v = rng.choice(mutable)
            op = rng.choice(_ASSIGN_OPS)
            value = self.expr(ctx)
            if op == "=" and rng.random() < 0.4:
                value = N.Binary(rng.choice(("+", "-", "*")), N.Identifier(v.name), value)
            return [N.ExprStmt(N.Assign(op, N.Identifier(v.name), value))]
        if r < 0.38 and mutable:
            v = rng.choice(mutable)
            return [N.ExprStmt(N.Update(rng.choice(("++", "--")), rng.random() < 0.5, N.Identifier(v.name)))]
        if r < 0.48:
            args = [self.expr(ctx) for _ in range(rng.randint(1, 2))]
            return [N.ExprStmt(N.Call(N.Member(N.Identifier("console"), "log"), args))]
        if r < 0.58 and not deep:
            test = self.expr(ctx)
            if rng.random() < 0.3:
                test = N.Unary("!", test)
            alt = N.Block(self.block(ctx, rng.randint(0, 2))) if rng.random() < 0.5 else None
            return [N.If(test, N.Block(self.block(ctx, rng.randint(1, 3))), alt)]
        if r < 0.64 and not deep:
            i = self.fresh()
            inner = _Ctx(ctx.visible + [_Var(i, False)], ctx.depth + 1, ctx.loop_depth + 1)
            body = self.statements(inner, rng.randint(1, 3))
            if rng.random() < 0.3:
                closure = N.ArrowFunction([], N.Identifier(i))
                body.append(N.ExprStmt(N.Call(N.Member(N.Identifier("console"), "log"), [N.Call(closure, [])])))
            init = N.VarDecl("let", [N.Declarator(N.Identifier(i), N.NumberLit(0.0))])
            test = N.Binary("<", N.Identifier(i), N.NumberLit(float(rng.randint(0, 4))))
            return [N.For(init, test, N.Update("++", False, N.Identifier(i)), N.Block(body))]
        if r < 0.68 and not deep:
            w = self.fresh()
            ctx.visible.append(_Var(w, False))
            decl = N.VarDecl("let", [N.Declarator(N.Identifier(w), N.NumberLit(0.0))])
            inner = _Ctx(list(ctx.visible), ctx.depth + 1, ctx.loop_depth + 1)
            body = [N.ExprStmt(N.Update("++", False, N.Identifier(w)))] + self.statements(inner, rng.randint(1, 2))
            test = N.Binary("<", N.Identifier(w), N.NumberLit(float(rng.randint(0, 3))))
            return [decl, N.While(test, N.Block(body))]
        if r < 0.73 and not deep:
            name = self.fresh()
            params = [N.Identifier(self.fresh()) for _ in range(rng.randint(0, 2))]
            inner = _Ctx(ctx.visible + [_Var(p.name, True) for p in params], ctx.depth + 1)
            body = self.statements(inner, rng.randint(0, 2)) + [N.Return(self.expr(inner))]
            ctx.visible.append(_Var(name, False, len(params)))
            return [N.FunctionDecl(N.Identifier(name), params, N.Block(body))]
        if r < 0.77:
            return [N.Comment(" " + rng.choice(("note", "todo", "step")), rng.random() < 0.3)]
        if r < 0.8 and not deep:
            return [N.If(N.BoolLit(False), N.Block(self.block(ctx, 1)))]
        if r < 0.84:
            return [N.ExprStmt(self.expr(ctx))]
        if r < 0.87 and not deep and ctx.depth > 0:
            return [N.Return(self.expr(ctx) if rng.random() < 0.8 else None)]
        if r < 0.9:
            name = self.fresh()
            elems = [self.expr(ctx) for _ in range(rng.randint(0, 3))]
            ctx.visible.append(_Var(name, True))
            stmts = [N.VarDecl("let", [N.Declarator(N.Identifier(name), N.ArrayLit(elems))])]
            stmts.append(N.ExprStmt(N.Call(N.Member(N.Identifier(name), "push"), [self.expr(ctx)])))
            return stmts
        return [N.ExprStmt(N.Call(N.Member(N.Identifier("console"), "log"), [self.expr(ctx)]))]

    def program(self) -> N.Program:
        rng = self.rng
        body = []
        glob = _Ctx()
        if rng.random() < 0.3:
            name = self.fresh()
            body.append(N.VarDecl("const", [N.Declarator(N.Identifier(name), self.literal())]))
            glob.visible.append(_Var(name, False))
        params = [N.Identifier(self.fresh()) for _ in range(rng.randint(1, 3))]
        ctx = _Ctx(glob.visible + [_Var(p.name, True) for p in params], 1)
        stmts = self.statements(ctx, rng.randint(3, 8))
        stmts.append(N.Return(self.expr(ctx)))
        if rng.random() < 0.3:
            stmts.append(N.ExprStmt(N.Call(N.Member(N.Identifier("console"), "log"), [N.StringLit("dead")])))
        body.append(N.FunctionDecl(N.Identifier("main"), params, N.Block(stmts)))
        return N.Program(body)


def random_program(seed: int, max_depth: int = 3) -> N.Program:
    """A random terminating program whose entry point is ``main``."""
    return ProgramGenerator(random.Random(seed), max_depth).program()


def random_source(seed: int, style: PrintStyle = PrintStyle.BEAUTIFIED) -> str:
    return print_ast(random_program(seed), style)
