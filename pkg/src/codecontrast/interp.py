"""Reference interpreter for the JavaScript subset.

Used as the equivalence oracle for transforms: two programs are considered
equivalent on an input when they return (or throw) the same thing and log the
same sequence of values. Error messages never mention local identifier names,
so renaming passes cannot change them.

The step counter only ticks on loop iterations and user-function calls, which
keeps it invariant under every semantics-preserving pass.
"""

from __future__ import annotations

import math
import random
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .syntax import nodes as N
from .syntax.printer import js_number_to_string


class _JSNull:
    __slots__ = ()

    def __repr__(self):
        return "null"


class _JSUndefined:
    __slots__ = ()

    def __repr__(self):
        return "undefined"


NULL = _JSNull()
UNDEFINED = _JSUndefined()
_TDZ = object()

MAX_CALL_DEPTH = 100
DEFAULT_STEP_LIMIT = 10_000


class Closure:
    __slots__ = ("params", "body", "env", "arrow")

    def __init__(self, params, body, env, arrow=False):
        self.params = params
        self.body = body
        self.env = env
        self.arrow = arrow


class Builtin:
    __slots__ = ("name", "impl")

    def __init__(self, name, impl):
        self.name = name
        self.impl = impl


class JSThrow(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class _StepLimit(Exception):
    pass


class _Return:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class Env:
    __slots__ = ("vars", "consts", "parent")

    def __init__(self, parent=None):
        self.vars = {}
        self.consts = None
        self.parent = parent

    def find(self, name):
        e = self
        while e is not None:
            if name in e.vars:
                return e
            e = e.parent
        return None

    def copy_shallow(self):
        new = Env(self.parent)
        new.vars = dict(self.vars)
        new.consts = self.consts
        return new


# -- conversions ---------------------------------------------------------------

_NUM_RE = re.compile(r"[+-]?(?:Infinity|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\Z")
_WS = " \t\n\r\v\f ﻿  "


def is_number(v) -> bool:
    return type(v) is float


def to_number(v) -> float:
    t = type(v)
    if t is float:
        return v
    if t is bool:
        return 1.0 if v else 0.0
    if t is str:
        s = v.strip(_WS)
        if not s:
            return 0.0
        if s[:2] in ("0x", "0X"):
            try:
                return float(int(s[2:], 16))
            except ValueError:
                return math.nan
        if _NUM_RE.match(s):
            if s.endswith("Infinity"):
                return -math.inf if s[0] == "-" else math.inf
            return float(s)
        return math.nan
    if v is NULL:
        return 0.0
    if v is UNDEFINED:
        return math.nan
    if t is list or t is dict:
        return to_number(to_string(v))
    return math.nan


def to_string(v, _seen=None) -> str:
    t = type(v)
    if t is str:
        return v
    if t is float:
        return js_number_to_string(v)
    if t is bool:
        return "true" if v else "false"
    if v is NULL:
        return "null"
    if v is UNDEFINED:
        return "undefined"
    if t is list:
        if _seen is None:
            _seen = set()
        if id(v) in _seen:
            return ""
        _seen.add(id(v))
        out = ",".join("" if (e is NULL or e is UNDEFINED) else to_string(e, _seen) for e in v)
        _seen.discard(id(v))
        return out
    if t is dict:
        return "[object Object]"
    return "function"


def to_boolean(v) -> bool:
    t = type(v)
    if t is bool:
        return v
    if t is float:
        return not (v == 0 or v != v)
    if t is str:
        return len(v) > 0
    if v is NULL or v is UNDEFINED:
        return False
    return True


def to_primitive(v):
    t = type(v)
    if t is list or t is dict or t is Closure or t is Builtin:
        return to_string(v)
    return v


def type_of(v) -> str:
    t = type(v)
    if t is float:
        return "number"
    if t is str:
        return "string"
    if t is bool:
        return "boolean"
    if v is UNDEFINED:
        return "undefined"
    if t is Closure or t is Builtin:
        return "function"
    return "object"


def strict_equals(a, b) -> bool:
    ta, tb = type(a), type(b)
    if ta is not tb:
        return False
    if ta is float or ta is str or ta is bool:
        return a == b
    return a is b


def loose_equals(a, b) -> bool:
    ta, tb = type(a), type(b)
    if ta is tb:
        return strict_equals(a, b)
    nullish = (NULL, UNDEFINED)
    if a in nullish and b in nullish:
        return True
    if a in nullish or b in nullish:
        return False
    if ta is float and tb is str:
        return a == to_number(b)
    if ta is str and tb is float:
        return to_number(a) == b
    if ta is bool:
        return loose_equals(to_number(a), b)
    if tb is bool:
        return loose_equals(a, to_number(b))
    if ta in (list, dict, Closure, Builtin) and tb in (float, str):
        return loose_equals(to_primitive(a), b)
    if tb in (list, dict, Closure, Builtin) and ta in (float, str):
        return loose_equals(a, to_primitive(b))
    return False


def _div(a: float, b: float) -> float:
    if b == 0:
        if a != a or a == 0:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def _mod(a: float, b: float) -> float:
    if b == 0 or a != a or b != b or math.isinf(a):
        return math.nan
    if math.isinf(b):
        return a
    return math.fmod(a, b)


def _less(a, b) -> Optional[bool]:
    """Abstract relational comparison; None stands for 'undefined' (a NaN was involved)."""
    a, b = to_primitive(a), to_primitive(b)
    if type(a) is str and type(b) is str:
        return a < b
    x, y = to_number(a), to_number(b)
    if x != x or y != y:
        return None
    return x < y


def binary_op(op: str, a, b):
    """Apply a non-short-circuit binary operator to two JS values."""
    if op == "+":
        a, b = to_primitive(a), to_primitive(b)
        if type(a) is str or type(b) is str:
            return to_string(a) + to_string(b)
        return to_number(a) + to_number(b)
    if op == "-":
        return to_number(a) - to_number(b)
    if op == "*":
        return to_number(a) * to_number(b)
    if op == "/":
        return _div(to_number(a), to_number(b))
    if op == "%":
        return _mod(to_number(a), to_number(b))
    if op == "===":
        return strict_equals(a, b)
    if op == "!==":
        return not strict_equals(a, b)
    if op == "==":
        return loose_equals(a, b)
    if op == "!=":
        return not loose_equals(a, b)
    if op == "<":
        return _less(a, b) is True
    if op == ">":
        return _less(b, a) is True
    if op == "<=":
        r = _less(b, a)
        return r is False
    if op == ">=":
        r = _less(a, b)
        return r is False
    raise JSThrow(f"SyntaxError: unsupported operator {op}")


def unary_op(op: str, v):
    if op == "!":
        return not to_boolean(v)
    if op == "-":
        return -to_number(v)
    if op == "+":
        return to_number(v)
    if op == "typeof":
        return type_of(v)
    if op == "void":
        return UNDEFINED
    raise JSThrow(f"SyntaxError: unsupported operator {op}")


def _to_integer(v) -> float:
    x = to_number(v)
    if x != x:
        return 0.0
    if math.isinf(x):
        return x
    return float(math.trunc(x))


def _rel_index(arg, length: int, default: int) -> int:
    if arg is UNDEFINED:
        return default
    r = _to_integer(arg)
    if r < 0:
        return int(max(length + r, 0))
    return int(min(r, length))


def _array_index(key: str) -> int:
    if key.isdigit() and (key == "0" or key[0] != "0") and len(key) < 11:
        return int(key)
    return -1


def to_property_key(v) -> str:
    return v if type(v) is str else to_string(v)


# -- builtins --------------------------------------------------------------------


def _arg(args, i):
    return args[i] if i < len(args) else UNDEFINED


def _math_floor(args):
    x = to_number(_arg(args, 0))
    if x != x or math.isinf(x) or x == 0:
        return x
    return float(math.floor(x))


def _math_ceil(args):
    x = to_number(_arg(args, 0))
    if x != x or math.isinf(x) or x == 0:
        return x
    r = float(math.ceil(x))
    return -0.0 if r == 0 and x < 0 else r


def _math_round(args):
    x = to_number(_arg(args, 0))
    if x != x or math.isinf(x) or x == 0:
        return x
    if -0.5 <= x < 0:
        return -0.0
    return float(math.floor(x + 0.5))


def _math_abs(args):
    return abs(to_number(_arg(args, 0)))


def _math_sqrt(args):
    x = to_number(_arg(args, 0))
    if x != x or x < 0:
        return math.nan
    return math.sqrt(x)


def _math_max(args):
    best = -math.inf
    for a in args:
        x = to_number(a)
        if x != x:
            return math.nan
        if x > best or (x == 0 and best == 0 and math.copysign(1, best) < 0):
            best = x
    return best


def _math_min(args):
    best = math.inf
    for a in args:
        x = to_number(a)
        if x != x:
            return math.nan
        if x < best or (x == 0 and best == 0 and math.copysign(1, x) < 0):
            best = x
    return best


_MATH_FUNCS = {
    "floor": _math_floor, "ceil": _math_ceil, "round": _math_round, "abs": _math_abs,
    "sqrt": _math_sqrt, "max": _math_max, "min": _math_min,
}


def _array_method(arr: list, name: str):
    if name == "push":
        def push(args):
            arr.extend(args)
            return float(len(arr))
        return Builtin("push", push)
    if name == "pop":
        return Builtin("pop", lambda args: arr.pop() if arr else UNDEFINED)
    if name == "slice":
        def slice_(args):
            n = len(arr)
            s = _rel_index(_arg(args, 0), n, 0)
            e = _rel_index(_arg(args, 1), n, n)
            return arr[s:e] if e > s else []
        return Builtin("slice", slice_)
    if name == "indexOf":
        def index_of(args):
            x = _arg(args, 0)
            for i, v in enumerate(arr):
                if strict_equals(v, x):
                    return float(i)
            return -1.0
        return Builtin("indexOf", index_of)
    if name == "join":
        def join(args):
            sep = _arg(args, 0)
            sep = "," if sep is UNDEFINED else to_string(sep)
            return sep.join("" if (e is NULL or e is UNDEFINED) else to_string(e) for e in arr)
        return Builtin("join", join)
    if name == "concat":
        def concat(args):
            out = list(arr)
            for a in args:
                if type(a) is list:
                    out.extend(a)
                else:
                    out.append(a)
            return out
        return Builtin("concat", concat)
    return None


def _string_method(s: str, name: str):
    if name == "slice":
        def slice_(args):
            n = len(s)
            a = _rel_index(_arg(args, 0), n, 0)
            b = _rel_index(_arg(args, 1), n, n)
            return s[a:b] if b > a else ""
        return Builtin("slice", slice_)
    if name == "indexOf":
        return Builtin("indexOf", lambda args: float(s.find(to_string(_arg(args, 0)))))
    if name == "charAt":
        def char_at(args):
            i = _to_integer(_arg(args, 0))
            return s[int(i)] if 0 <= i < len(s) else ""
        return Builtin("charAt", char_at)
    if name == "toUpperCase":
        return Builtin("toUpperCase", lambda args: s.upper())
    if name == "toLowerCase":
        return Builtin("toLowerCase", lambda args: s.lower())
    return None


def get_property(obj, key: str):
    t = type(obj)
    if t is list:
        idx = _array_index(key)
        if idx >= 0:
            return obj[idx] if idx < len(obj) else UNDEFINED
        if key == "length":
            return float(len(obj))
        m = _array_method(obj, key)
        return UNDEFINED if m is None else m
    if t is dict:
        return obj.get(key, UNDEFINED)
    if t is str:
        idx = _array_index(key)
        if idx >= 0:
            return obj[idx] if idx < len(obj) else UNDEFINED
        if key == "length":
            return float(len(obj))
        m = _string_method(obj, key)
        return UNDEFINED if m is None else m
    if obj is NULL or obj is UNDEFINED:
        raise JSThrow(f"TypeError: Cannot read properties of {obj!r} (reading '{key}')")
    return UNDEFINED


def set_property(obj, key: str, value):
    t = type(obj)
    if t is dict:
        obj[key] = value
        return
    if t is list:
        idx = _array_index(key)
        if idx >= 0:
            if idx >= 100_000:
                raise JSThrow("RangeError: array too large")
            if idx >= len(obj):
                obj.extend([UNDEFINED] * (idx + 1 - len(obj)))
            obj[idx] = value
            return
    if obj is NULL or obj is UNDEFINED:
        raise JSThrow(f"TypeError: Cannot set properties of {obj!r} (setting '{key}')")
    raise JSThrow(f"TypeError: Cannot assign to property '{key}'")


# -- outcomes ----------------------------------------------------------------------


def canonical(v, _seen=None):
    """Hashable structural snapshot of a JS value."""
    t = type(v)
    if t is float:
        return ("n", repr(v))
    if t is str:
        return ("s", v)
    if t is bool:
        return ("b", v)
    if v is NULL:
        return ("null",)
    if v is UNDEFINED:
        return ("undefined",)
    if t is list or t is dict:
        if _seen is None:
            _seen = set()
        if id(v) in _seen:
            return ("cycle",)
        _seen.add(id(v))
        if t is list:
            out = ("a", tuple(canonical(e, _seen) for e in v))
        else:
            out = ("o", tuple(sorted((k, canonical(x, _seen)) for k, x in v.items())))
        _seen.discard(id(v))
        return out
    if t is Closure:
        return ("f", len(v.params))
    if t is Builtin:
        return ("builtin", v.name)
    return ("?", repr(v))


RETURNED = "returned"
THREW = "threw"
STEP_LIMIT = "step_limit"


@dataclass
class EvalOutcome:
    kind: str  # returned | threw | step_limit
    value: Any = None  # canonical snapshot when returned
    message: Optional[str] = None
    log: list = field(default_factory=list)
    steps: int = 0

    def signature(self):
        return (self.kind, self.value, self.message, tuple(self.log))

    @property
    def python_value(self):
        """Best-effort plain-Python view of a returned value."""
        return from_canonical(self.value) if self.kind == RETURNED else None


def from_canonical(c):
    tag = c[0]
    if tag == "n":
        return float(c[1])
    if tag in ("s", "b"):
        return c[1]
    if tag == "null":
        return None
    if tag == "undefined":
        return UNDEFINED
    if tag == "a":
        return [from_canonical(x) for x in c[1]]
    if tag == "o":
        return {k: from_canonical(x) for k, x in c[1]}
    return c


def to_js(v):
    """Convert a plain Python value into a fresh JS value."""
    if v is None:
        return NULL
    if v is UNDEFINED or v is NULL:
        return v
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)):
        return [to_js(x) for x in v]
    if isinstance(v, dict):
        return {str(k): to_js(x) for k, x in v.items()}
    raise TypeError(f"cannot convert {type(v).__name__} to a JS value")


# -- evaluator ------------------------------------------------------------------------


class Interpreter:
    def __init__(self, step_limit: int = DEFAULT_STEP_LIMIT):
        self.step_limit = step_limit
        self.steps = 0
        self.depth = 0
        self.log: list = []
        self._hoist_cache: dict[int, tuple] = {}
        self.globals = Env()
        self.globals.vars["Math"] = {k: Builtin(k, f) for k, f in _MATH_FUNCS.items()}
        self.globals.vars["console"] = {"log": Builtin("log", self._console_log)}

    def _console_log(self, args):
        self.log.append(tuple(canonical(a) for a in args))
        return UNDEFINED

    def tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise _StepLimit()

    # -- scoping helpers ---------------------------------------------------------

    def _hoisted(self, stmts: list):
        key = id(stmts)
        hit = self._hoist_cache.get(key)
        if hit is not None and hit[0] is stmts:
            return hit[1], hit[2]
        var_names: list[str] = []
        self._collect_vars(stmts, var_names)
        lexical = []
        for s in stmts:
            if type(s) is N.VarDecl and s.kind != "var":
                for d in s.declarations:
                    lexical.append(d.id.name)
        self._hoist_cache[key] = (stmts, var_names, lexical)
        return var_names, lexical

    def _collect_vars(self, stmts, out):
        for s in stmts:
            t = type(s)
            if t is N.VarDecl:
                if s.kind == "var":
                    out.extend(d.id.name for d in s.declarations)
            elif t is N.If:
                self._collect_vars(s.consequent.body, out)
                if s.alternate is not None:
                    self._collect_vars([s.alternate], out)
            elif t is N.While:
                self._collect_vars(s.body.body, out)
            elif t is N.For:
                if type(s.init) is N.VarDecl and s.init.kind == "var":
                    out.extend(d.id.name for d in s.init.declarations)
                self._collect_vars(s.body.body, out)
            elif t is N.Block:
                self._collect_vars(s.body, out)

    def _enter_lexical(self, stmts: list, env: Env):
        _, lexical = self._hoisted(stmts)
        for name in lexical:
            env.vars[name] = _TDZ
        for s in stmts:
            if type(s) is N.FunctionDecl:
                env.vars[s.id.name] = Closure(s.params, s.body, env)

    def _make_function(self, node, env: Env):
        if type(node) is N.FunctionExpr and node.id is not None:
            fenv = Env(env)
            clo = Closure(node.params, node.body, fenv)
            fenv.vars[node.id.name] = clo
            fenv.consts = {node.id.name}
            return clo
        return Closure(node.params, node.body, env, type(node) is N.ArrowFunction)

    # -- calls ------------------------------------------------------------------------

    def call(self, fn, args: list):
        t = type(fn)
        if t is Builtin:
            return fn.impl(args)
        if t is not Closure:
            raise JSThrow("TypeError: not a function")
        self.tick()
        if self.depth >= MAX_CALL_DEPTH:
            raise JSThrow("RangeError: Maximum call stack size exceeded")
        self.depth += 1
        try:
            env = Env(fn.env)
            v = env.vars
            for i, p in enumerate(fn.params):
                v[p.name] = args[i] if i < len(args) else UNDEFINED
            body = fn.body
            if type(body) is not N.Block:
                return self.expr(body, env)
            var_names, _ = self._hoisted(body.body)
            for name in var_names:
                if name not in v:
                    v[name] = UNDEFINED
            self._enter_lexical(body.body, env)
            r = self.exec_list(body.body, env)
            if r is not None:
                return r.value
            return UNDEFINED
        finally:
            self.depth -= 1

    # -- statements -----------------------------------------------------------------------

    def exec_list(self, stmts: list, env: Env):
        for s in stmts:
            r = self.stmt(s, env)
            if r is not None:
                return r
        return None

    def block(self, block: N.Block, env: Env):
        stmts = block.body
        _, lexical = self._hoisted(stmts)
        if lexical or any(type(s) is N.FunctionDecl for s in stmts):
            env = Env(env)
            self._enter_lexical(stmts, env)
        return self.exec_list(stmts, env)

    def stmt(self, s, env: Env):
        t = type(s)
        if t is N.ExprStmt:
            self.last_value = self.expr(s.expression, env)
            return None
        if t is N.VarDecl:
            self.var_decl(s, env)
            return None
        if t is N.Return:
            return _Return(UNDEFINED if s.argument is None else self.expr(s.argument, env))
        if t is N.If:
            if to_boolean(self.expr(s.test, env)):
                return self.block(s.consequent, env)
            alt = s.alternate
            if alt is None:
                return None
            if type(alt) is N.If:
                return self.stmt(alt, env)
            return self.block(alt, env)
        if t is N.While:
            while True:
                if not to_boolean(self.expr(s.test, env)):
                    return None
                self.tick()
                r = self.block(s.body, env)
                if r is not None:
                    return r
        if t is N.For:
            return self.for_stmt(s, env)
        if t is N.Block:
            return self.block(s, env)
        if t is N.FunctionDecl or t is N.Comment:
            return None
        raise JSThrow(f"SyntaxError: unexpected statement {t.__name__}")

    def var_decl(self, s: N.VarDecl, env: Env):
        if s.kind == "var":
            for d in s.declarations:
                if d.init is not None:
                    val = self.expr(d.init, env)
                    self.assign_name(d.id.name, val, env, declaring=True)
            return
        for d in s.declarations:
            val = UNDEFINED if d.init is None else self.expr(d.init, env)
            env.vars[d.id.name] = val
            if s.kind == "const":
                if env.consts is None:
                    env.consts = set()
                env.consts.add(d.id.name)

    def for_stmt(self, s: N.For, env: Env):
        init = s.init
        per_iteration = type(init) is N.VarDecl and init.kind != "var"
        if per_iteration:
            env = Env(env)
            for d in init.declarations:
                env.vars[d.id.name] = _TDZ
            self.var_decl(init, env)
            env = env.copy_shallow()
        elif type(init) is N.VarDecl:
            self.var_decl(init, env)
        elif init is not None:
            self.expr(init, env)
        while True:
            if s.test is not None and not to_boolean(self.expr(s.test, env)):
                return None
            self.tick()
            r = self.block(s.body, env)
            if r is not None:
                return r
            if per_iteration:
                env = env.copy_shallow()
            if s.update is not None:
                self.expr(s.update, env)

    # -- references -----------------------------------------------------------------------

    def lookup(self, name: str, env: Env):
        e = env.find(name)
        if e is None:
            e = self.globals if name in self.globals.vars else None
        if e is None:
            raise JSThrow(f"ReferenceError: {name} is not defined")
        v = e.vars[name]
        if v is _TDZ:
            raise JSThrow("ReferenceError: Cannot access binding before initialization")
        return v

    def assign_name(self, name: str, value, env: Env, declaring: bool = False):
        e = env.find(name)
        if e is None:
            if name in self.globals.vars:
                e = self.globals
            else:
                raise JSThrow(f"ReferenceError: {name} is not defined")
        if not declaring:
            if e.vars[name] is _TDZ:
                raise JSThrow("ReferenceError: Cannot access binding before initialization")
            if e.consts is not None and name in e.consts:
                raise JSThrow("TypeError: Assignment to constant variable.")
        e.vars[name] = value

    # -- expressions ---------------------------------------------------------------------

    def expr(self, e, env: Env):
        t = type(e)
        if t is N.Identifier:
            return self.lookup(e.name, env)
        if t is N.NumberLit or t is N.StringLit or t is N.BoolLit:
            return e.value
        if t is N.Binary:
            op = e.op
            if op == "&&":
                left = self.expr(e.left, env)
                return self.expr(e.right, env) if to_boolean(left) else left
            if op == "||":
                left = self.expr(e.left, env)
                return left if to_boolean(left) else self.expr(e.right, env)
            left = self.expr(e.left, env)
            right = self.expr(e.right, env)
            return binary_op(op, left, right)
        if t is N.Member:
            obj = self.expr(e.object, env)
            key = to_property_key(self.expr(e.property, env)) if e.computed else e.property
            return get_property(obj, key)
        if t is N.Call:
            return self.call_expr(e, env)
        if t is N.Unary:
            if e.op == "typeof" and type(e.argument) is N.Identifier:
                name = e.argument.name
                if env.find(name) is None and name not in self.globals.vars:
                    return "undefined"
            return unary_op(e.op, self.expr(e.argument, env))
        if t is N.Assign:
            return self.assign(e, env)
        if t is N.Update:
            return self.update(e, env)
        if t is N.NullLit:
            return NULL
        if t is N.UndefinedLit:
            return UNDEFINED
        if t is N.ArrayLit:
            return [self.expr(x, env) for x in e.elements]
        if t is N.ObjectLit:
            out = {}
            for p in e.properties:
                out[p.key] = self.expr(p.value, env)
            return out
        if t is N.FunctionExpr or t is N.ArrowFunction:
            return self._make_function(e, env)
        raise JSThrow(f"SyntaxError: unexpected expression {t.__name__}")

    def call_expr(self, e: N.Call, env: Env):
        callee = e.callee
        if type(callee) is N.Member:
            obj = self.expr(callee.object, env)
            key = to_property_key(self.expr(callee.property, env)) if callee.computed else callee.property
            fn = get_property(obj, key)
        else:
            fn = self.expr(callee, env)
        args = [self.expr(a, env) for a in e.arguments]
        return self.call(fn, args)

    def _reference(self, target, env: Env):
        if type(target) is N.Member:
            obj = self.expr(target.object, env)
            key = to_property_key(self.expr(target.property, env)) if target.computed else target.property
            return obj, key
        return None, target.name

    def _get_ref(self, obj, key, env):
        if obj is None:
            return self.lookup(key, env)
        return get_property(obj, key)

    def _put_ref(self, obj, key, value, env):
        if obj is None:
            self.assign_name(key, value, env)
        else:
            set_property(obj, key, value)

    def assign(self, e: N.Assign, env: Env):
        target = e.target
        if type(target) is N.Member:
            obj, key = self._reference(target, env)
        else:
            obj, key = None, target.name
        if e.op == "=":
            value = self.expr(e.value, env)
        else:
            old = self._get_ref(obj, key, env)
            value = binary_op(e.op[0], old, self.expr(e.value, env))
        self._put_ref(obj, key, value, env)
        return value

    def update(self, e: N.Update, env: Env):
        obj, key = self._reference(e.argument, env)
        old = to_number(self._get_ref(obj, key, env))
        new = old + 1 if e.op == "++" else old - 1
        self._put_ref(obj, key, new, env)
        return new if e.prefix else old

    # -- entry --------------------------------------------------------------------------

    def run(self, program: N.Program, args: list) -> Any:
        env = Env(None)
        var_names, _ = self._hoisted(program.body)
        for name in var_names:
            env.vars[name] = UNDEFINED
        self._enter_lexical(program.body, env)
        self.last_value = UNDEFINED
        r = self.exec_list(program.body, env)
        entry = N.entry_function(program)
        if entry is None:
            return r.value if r is not None else self.last_value
        fn = self.lookup(entry.id.name, env)
        return self.call(fn, args)


def evaluate(program: N.Program, entry_args: Sequence = (), step_limit: int = DEFAULT_STEP_LIMIT) -> EvalOutcome:
    """Run ``program`` and call its first function declaration with ``entry_args``.

    Arguments are plain Python values (None is ``null``) and are copied, so
    the caller's data is never mutated. Without a function declaration the
    value of the last top-level expression statement is returned.
    """
    interp = Interpreter(step_limit)
    args = [to_js(a) for a in entry_args]
    old_limit = sys.getrecursionlimit()
    if old_limit < 20_000:
        sys.setrecursionlimit(20_000)
    try:
        value = interp.run(program, args)
        return EvalOutcome(RETURNED, canonical(value), None, interp.log, interp.steps)
    except JSThrow as exc:
        return EvalOutcome(THREW, None, exc.message, interp.log, interp.steps)
    except _StepLimit:
        return EvalOutcome(STEP_LIMIT, None, None, interp.log, interp.steps - 1)
    except RecursionError:
        return EvalOutcome(THREW, None, "RangeError: Maximum call stack size exceeded", interp.log, interp.steps)
    finally:
        sys.setrecursionlimit(old_limit)


# -- equivalence ------------------------------------------------------------------------


@dataclass
class Verdict:
    status: str  # equivalent | diverged | inconclusive
    input: Optional[tuple] = None
    outcome1: Optional[EvalOutcome] = None
    outcome2: Optional[EvalOutcome] = None

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"


EQUIVALENT = "equivalent"
DIVERGED = "diverged"
INCONCLUSIVE = "inconclusive"


def check_equivalence(p1: N.Program, p2: N.Program, inputs: Sequence[Sequence], step_limit: int = DEFAULT_STEP_LIMIT) -> Verdict:
    """Bounded equivalence check of two programs over a list of argument tuples."""
    inconclusive = False
    for args in inputs:
        o1 = evaluate(p1, args, step_limit)
        o2 = evaluate(p2, args, step_limit)
        if o1.kind == STEP_LIMIT and o2.kind == STEP_LIMIT:
            inconclusive = True
            continue
        if o1.signature() != o2.signature():
            return Verdict(DIVERGED, tuple(args), o1, o2)
    return Verdict(INCONCLUSIVE if inconclusive else EQUIVALENT)


_WORDS = ["a", "b", "foo", "x", "hello", "", "42", "3.5", "abc", "Z"]


def random_value(rng: random.Random, depth: int = 0):
    r = rng.random()
    if r < 0.35:
        return rng.randint(-5, 12)
    if r < 0.45:
        return round(rng.uniform(-10, 10), 2)
    if r < 0.6:
        return rng.choice(_WORDS)
    if r < 0.7:
        return rng.random() < 0.5
    if r < 0.75:
        return None
    if depth < 2:
        n = rng.randint(0, 5)
        if rng.random() < 0.6:
            return [rng.randint(-5, 20) for _ in range(n)]
        return [random_value(rng, depth + 1) for _ in range(n)]
    return rng.randint(0, 9)


def random_inputs(arity: int, count: int, seed: int) -> list[tuple]:
    """Seeded random argument tuples drawn from small ints, floats, strings, bools and arrays."""
    rng = random.Random(seed)
    return [tuple(random_value(rng) for _ in range(arity)) for _ in range(count)]


def entry_arity(program: N.Program) -> int:
    fn = N.entry_function(program)
    return 0 if fn is None else len(fn.params)
