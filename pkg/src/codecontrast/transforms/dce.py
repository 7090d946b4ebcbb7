"""Dead-code elimination with a conservative effect analysis.

Calls, assignments, updates, property reads (which can throw on null) and
reads of unresolved names all count as effects. A ``let``/``const`` read
is only effect-free when it provably runs after the declaration, otherwise
it could hit the temporal dead zone.
"""

from __future__ import annotations

from ..syntax import nodes as N
from ..syntax.scope import analyze


def _constant_truth(e):
    t = type(e)
    if t is N.BoolLit:
        return e.value
    if t is N.NumberLit:
        return e.value != 0 and e.value == e.value
    if t is N.StringLit:
        return len(e.value) > 0
    if t is N.NullLit or t is N.UndefinedLit:
        return False
    if t is N.Unary and e.op == "!":
        inner = _constant_truth(e.argument)
        return None if inner is None else not inner
    if t is N.Unary and e.op == "void" and type(e.argument) in N.LITERALS:
        return False
    return None


def _has_var_decl(node) -> bool:
    stack = [node]
    while stack:
        n = stack.pop()
        t = type(n)
        if t is N.VarDecl and n.kind == "var":
            return True
        if t in N.FUNCTIONS and n is not node:
            continue
        stack.extend(N.children(n))
    return False


class _Purity:
    """Answers "can evaluating this expression be dropped?" for one analysed program."""

    def __init__(self, program, an):
        self.an = an
        self.order: dict[int, int] = {}
        self.func_of: dict[int, int] = {}
        self._number(program)

    def _number(self, program):
        # Source-order index and enclosing function of every Identifier.
        counter = 0
        stack = [(program, 0)]
        while stack:
            n, fn = stack.pop()
            if type(n) is N.Identifier:
                self.order[id(n)] = counter
                self.func_of[id(n)] = fn
                counter += 1
                continue
            inner = id(n) if type(n) in N.FUNCTIONS else fn
            kids = list(N.children(n))
            if type(n) is N.FunctionDecl:
                # The declared name belongs to the enclosing function.
                stack.extend((k, inner) for k in reversed(kids[1:]))
                stack.append((kids[0], fn))
            else:
                stack.extend((k, inner) for k in reversed(kids))

    def ident(self, e) -> bool:
        b = self.an.resolve(e)
        if b is None:
            return False
        if b.kind in ("let", "const"):
            d = b.decl
            return self.func_of[id(d)] == self.func_of[id(e)] and self.order[id(d)] < self.order[id(e)]
        return True

    def pure(self, e) -> bool:
        t = type(e)
        if t in N.LITERALS or t is N.FunctionExpr or t is N.ArrowFunction:
            return True
        if t is N.Identifier:
            return self.ident(e)
        if t is N.Binary:
            return self.pure(e.left) and self.pure(e.right)
        if t is N.Unary:
            return self.pure(e.argument)
        if t is N.ArrayLit:
            return all(self.pure(x) for x in e.elements)
        if t is N.ObjectLit:
            return all(self.pure(p.value) for p in e.properties)
        return False


def _prune_list(stmts: list, an, purity: _Purity, top: bool) -> tuple[list, bool]:
    out = []
    changed = False
    returned = False
    for s in stmts:
        t = type(s)
        if returned and t not in (N.VarDecl, N.FunctionDecl):
            changed = True
            continue
        if t is N.ExprStmt and not top and purity.pure(s.expression):
            changed = True
            continue
        if t is N.VarDecl and not top:
            keep = [d for d in s.declarations
                    if an.resolve(d.id).references or (d.init is not None and not purity.pure(d.init))]
            if len(keep) != len(s.declarations):
                changed = True
                if not keep:
                    continue
                s.declarations = keep
        if t is N.FunctionDecl and not top and not an.resolve(s.id).references:
            changed = True
            continue
        if t is N.Block and not s.body:
            changed = True
            continue
        if t is N.If:
            truth = _constant_truth(s.test)
            if truth is not None:
                dead = s.alternate if truth else s.consequent
                live = s.consequent if truth else s.alternate
                if dead is None or not _has_var_decl(dead):
                    changed = True
                    if live is not None:
                        out.append(live)
                    continue
            elif not s.consequent.body and s.alternate is None:
                changed = True
                out.append(N.ExprStmt(s.test))
                continue
        if t is N.While and _constant_truth(s.test) is False and not _has_var_decl(s.body):
            changed = True
            continue
        if t is N.Return:
            returned = True
        out.append(s)
    return out, changed


def _pass(program: N.Program) -> bool:
    an = analyze(program)
    purity = _Purity(program, an)
    changed = False
    program.body, c = _prune_list(program.body, an, purity, top=True)
    changed |= c
    for n in N.walk(program):
        if type(n) is N.Block:
            n.body, c = _prune_list(n.body, an, purity, top=False)
            changed |= c
        elif type(n) is N.For and type(n.init) is N.VarDecl:
            decl = n.init
            keep = [d for d in decl.declarations
                    if an.resolve(d.id).references or (d.init is not None and not purity.pure(d.init))]
            if len(keep) != len(decl.declarations):
                changed = True
                if keep:
                    decl.declarations = keep
                else:
                    n.init = None
    return changed


def eliminate_dead_code(program: N.Program, rng=None, max_rounds: int = 20) -> None:
    """Remove unused effect-free code in place, iterating to a fixed point."""
    for _ in range(max_rounds):
        if not _pass(program):
            return
