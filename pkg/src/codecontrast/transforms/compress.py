"""Structural rewrites performed by the compression pass before compact printing."""

from __future__ import annotations

from ..syntax import nodes as N

_SYMMETRIC_EQ = {"===", "!==", "==", "!="}
_COMPOUND = {"+", "-", "*", "/", "%"}


def _lexical(stmts) -> bool:
    for s in stmts:
        if type(s) is N.FunctionDecl or (type(s) is N.VarDecl and s.kind != "var"):
            return True
    return False


def _flatten(stmts: list) -> list:
    out = []
    for s in stmts:
        if type(s) is N.Comment:
            continue
        if type(s) is N.Block and not _lexical(s.body):
            out.extend(_flatten(s.body))
        else:
            out.append(s)
    return out


def _merge_decls(stmts: list) -> list:
    out = []
    for s in stmts:
        prev = out[-1] if out else None
        if type(s) is N.VarDecl and type(prev) is N.VarDecl and prev.kind == s.kind:
            prev.declarations.extend(s.declarations)
        else:
            out.append(s)
    return out


def _rewrite_stmt(s):
    t = type(s)
    if t is N.Return and type(s.argument) is N.UndefinedLit:
        s.argument = None
    elif t is N.If and type(s.test) is N.Unary and s.test.op == "!" and type(s.alternate) is N.Block:
        s.test = s.test.argument
        s.consequent, s.alternate = s.alternate, s.consequent


def _rewrite_expr(e):
    t = type(e)
    if t is N.Binary and e.op in _SYMMETRIC_EQ:
        if type(e.right) in N.LITERALS and type(e.left) not in N.LITERALS:
            e.left, e.right = e.right, e.left
    elif t is N.Assign and e.op == "=" and type(e.target) is N.Identifier:
        v = e.value
        if (type(v) is N.Binary and v.op in _COMPOUND and type(v.left) is N.Identifier
                and v.left.name == e.target.name):
            e.op = v.op + "="
            e.value = v.right


def compress(program: N.Program, rng=None) -> None:
    """Merge declarations, drop redundant blocks and prefer shorter equivalent forms."""
    for n in N.walk(program):
        t = type(n)
        if t is N.Program or t is N.Block:
            body = [s for s in n.body if type(s) is not N.Comment]
            n.body = _merge_decls(_flatten(body))
        elif t is N.If or t is N.Return:
            _rewrite_stmt(n)
        else:
            _rewrite_expr(n)
