"""Literal-level passes: boolean/undefined rewriting and constant folding."""

from __future__ import annotations

import math

from .. import interp as I
from ..syntax import nodes as N

_MAX_FOLDED_STRING = 200


def _is_num(e, value) -> bool:
    return type(e) is N.NumberLit and e.value == value


def _swap_literal(e):
    t = type(e)
    if t is N.BoolLit:
        return N.Unary("!", N.NumberLit(0.0 if e.value else 1.0))
    if t is N.UndefinedLit:
        return N.Unary("void", N.NumberLit(0.0))
    if t is N.Unary:
        if e.op == "!" and (_is_num(e.argument, 0.0) or _is_num(e.argument, 1.0)):
            return N.BoolLit(e.argument.value == 0.0)
        if e.op == "void" and _is_num(e.argument, 0.0):
            return N.UndefinedLit()
    return None


def _map_expressions(node, fn):
    """Post-order rewrite of every expression slot under ``node`` using ``fn``."""
    for name in node._children:
        v = getattr(node, name)
        if isinstance(v, list):
            for i, x in enumerate(v):
                if isinstance(x, N.Node):
                    _map_expressions(x, fn)
                    r = fn(x)
                    if r is not None:
                        v[i] = r
        elif isinstance(v, N.Node):
            _map_expressions(v, fn)
            r = fn(v)
            if r is not None:
                setattr(node, name, r)


def rewrite_booleans(program: N.Program, rng=None) -> None:
    """Swap ``true``/``false``/``undefined`` with ``!0``/``!1``/``void 0`` and back."""
    _map_expressions(program, _swap_literal)


# -- constant folding ---------------------------------------------------------

_NO_VALUE = object()


def literal_value(e):
    """JS value of a constant literal node, or ``_NO_VALUE``."""
    t = type(e)
    if t is N.NumberLit or t is N.StringLit or t is N.BoolLit:
        return e.value
    if t is N.NullLit:
        return I.NULL
    if t is N.UndefinedLit:
        return I.UNDEFINED
    if t is N.Unary and e.op == "-" and type(e.argument) is N.NumberLit:
        return -e.argument.value
    return _NO_VALUE


def value_literal(v):
    """Literal node for a JS value, or None when the value has no plain literal form."""
    t = type(v)
    if t is float:
        if v != v or math.isinf(v) or (v == 0 and math.copysign(1.0, v) < 0):
            return None
        return N.NumberLit(v) if v >= 0 else N.Unary("-", N.NumberLit(-v))
    if t is str:
        return N.StringLit(v) if len(v) <= _MAX_FOLDED_STRING else None
    if t is bool:
        return N.BoolLit(v)
    if v is I.NULL:
        return N.NullLit()
    if v is I.UNDEFINED:
        return N.UndefinedLit()
    return None


def _fold(e):
    t = type(e)
    if t is N.Binary:
        a = literal_value(e.left)
        if a is _NO_VALUE:
            return None
        if e.op in ("&&", "||"):
            truthy = I.to_boolean(a)
            keep_left = truthy if e.op == "||" else not truthy
            return e.left if keep_left else e.right
        b = literal_value(e.right)
        if b is _NO_VALUE:
            return None
        return value_literal(I.binary_op(e.op, a, b))
    if t is N.Unary:
        if e.op == "-" and type(e.argument) is N.NumberLit:
            return None
        a = literal_value(e.argument)
        if a is _NO_VALUE:
            return None
        return value_literal(I.unary_op(e.op, a))
    return None


def fold_constants(program: N.Program, rng=None) -> None:
    """Fold literal subexpressions bottom-up with the interpreter's own operators."""
    _map_expressions(program, _fold)


def fold_expression(e):
    """Fold a standalone expression node; returns the (possibly new) root."""
    holder = N.ExprStmt(e)
    _map_expressions(holder, _fold)
    return holder.expression
