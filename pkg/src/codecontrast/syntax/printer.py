"""Pretty-printer with three layout styles.

``beautified``   two-space indent, K&R braces, braces everywhere, comments kept.
``reformatted``  four-space indent, braces on their own line, comments kept.
``compact``      no optional whitespace, optional braces dropped, comments dropped.

All three emit the same code tokens except for optional ``{``/``}`` around
single-statement bodies.
"""

from __future__ import annotations

import enum

from . import nodes as N
from .lexer import is_id_part, is_id_start, KEYWORDS


class PrintStyle(str, enum.Enum):
    BEAUTIFIED = "beautified"
    REFORMATTED = "reformatted"
    COMPACT = "compact"


_PREC_BINARY = {
    "||": 2, "&&": 3,
    "==": 4, "!=": 4, "===": 4, "!==": 4,
    "<": 5, ">": 5, "<=": 5, ">=": 5,
    "+": 6, "-": 6,
    "*": 7, "/": 7, "%": 7,
}
P_ASSIGN, P_UNARY, P_POSTFIX, P_CALL, P_PRIMARY = 1, 8, 9, 10, 11


def js_number_to_string(v: float) -> str:
    """ECMAScript Number::toString for a Python float."""
    if v != v:
        return "NaN"
    if v == 0:
        return "0"
    if v < 0:
        return "-" + js_number_to_string(-v)
    if v == float("inf"):
        return "Infinity"
    r = repr(v)
    if "e" in r:
        mant, e = r.split("e")
        e = int(e)
    else:
        mant, e = r, 0
    if "." in mant:
        ip, fp = mant.split(".")
    else:
        ip, fp = mant, ""
    raw = ip + fp
    digits = raw.lstrip("0")
    n = len(ip) + e - (len(raw) - len(digits))
    digits = digits.rstrip("0")
    k = len(digits)
    if k <= n <= 21:
        return digits + "0" * (n - k)
    if 0 < n <= 21:
        return digits[:n] + "." + digits[n:]
    if -6 < n <= 0:
        return "0." + "0" * (-n) + digits
    exp = n - 1
    sign = "+" if exp >= 0 else "-"
    if k == 1:
        return f"{digits}e{sign}{abs(exp)}"
    return f"{digits[0]}.{digits[1:]}e{sign}{abs(exp)}"


_ESCAPES = {
    "\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r",
    "\b": "\\b", "\f": "\\f", "\v": "\\v", "\u2028": "\\u2028", "\u2029": "\\u2029",
}


def quote_string(s: str) -> str:
    out = ['"']
    for ch in s:
        esc = _ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\x{ord(ch):02x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def is_identifier_name(s: str) -> bool:
    return bool(s) and is_id_start(s[0]) and all(is_id_part(c) for c in s[1:])


def _leftmost(e):
    while True:
        if isinstance(e, N.Binary):
            e = e.left
        elif isinstance(e, N.Call):
            e = e.callee
        elif isinstance(e, N.Member):
            e = e.object
        elif isinstance(e, N.Assign):
            e = e.target
        elif isinstance(e, N.Update) and not e.prefix:
            e = e.argument
        else:
            return e


def _expr_prec(e) -> int:
    t = type(e)
    if t is N.Binary:
        return _PREC_BINARY[e.op]
    if t is N.Assign or t is N.ArrowFunction:
        return P_ASSIGN
    if t is N.Unary:
        return P_UNARY
    if t is N.Update:
        return P_UNARY if e.prefix else P_POSTFIX
    if t is N.Call or t is N.Member:
        return P_CALL
    return P_PRIMARY


def _real_statements(block) -> list:
    return [s for s in block.body if not isinstance(s, N.Comment)]


class _Printer:
    def __init__(self, style: PrintStyle):
        self.style = style
        self.compact = style is PrintStyle.COMPACT
        self.allman = style is PrintStyle.REFORMATTED
        self.unit = {"beautified": "  ", "reformatted": "    ", "compact": ""}[style.value]
        self.sp = "" if self.compact else " "
        self.kw_paren_space = style is PrintStyle.BEAUTIFIED
        self.out: list[str] = []
        self.last = ""
        self.level = 0

    # -- low-level emission ------------------------------------------------

    def w(self, s: str):
        if not s:
            return
        a, b = self.last, s[0]
        if a and (
            (is_id_part(a) and is_id_part(b))
            or (a in "+-" and b == a)
            or (a == "/" and b in "/*")
        ):
            self.out.append(" ")
        self.out.append(s)
        self.last = s[-1]

    def raw(self, s: str):
        if s:
            self.out.append(s)
            self.last = s[-1]

    def newline(self):
        if not self.compact:
            self.raw("\n")
            self.last = ""

    def indent(self):
        if not self.compact and self.level:
            self.raw(self.unit * self.level)
            self.last = ""

    def space(self):
        if not self.compact:
            self.raw(" ")
            self.last = ""

    # -- statements ----------------------------------------------------------

    def program(self, prog: N.Program) -> str:
        for s in prog.body:
            self.statement(s)
        return "".join(self.out)

    def statement(self, s):
        if isinstance(s, N.Comment):
            if self.compact:
                return
            self.indent()
            if s.block:
                self.raw("/*" + s.text + "*/")
            else:
                self.raw("//" + s.text)
            self.newline()
            return
        self.indent()
        self.statement_inline(s)
        self.newline()

    def statement_inline(self, s):
        t = type(s)
        if t is N.ExprStmt:
            lm = _leftmost(s.expression)
            if isinstance(lm, (N.FunctionExpr, N.ObjectLit)):
                self.w("(")
                self.expr(s.expression, 0)
                self.w(")")
            else:
                self.expr(s.expression, 0)
            self.w(";")
        elif t is N.VarDecl:
            self.var_decl(s)
            self.w(";")
        elif t is N.Return:
            self.w("return")
            if s.argument is not None:
                self.space()
                self.expr(s.argument, 0)
            self.w(";")
        elif t is N.FunctionDecl:
            self.w("function")
            self.w(s.id.name)
            self.param_list(s.params)
            self.function_body(s.body)
        elif t is N.If:
            self.if_stmt(s)
        elif t is N.While:
            self.keyword_paren("while")
            self.expr(s.test, 0)
            self.w(")")
            self.body(s.body, "loop")
        elif t is N.For:
            self.keyword_paren("for")
            if s.init is not None:
                if isinstance(s.init, N.VarDecl):
                    self.var_decl(s.init)
                else:
                    self.expr(s.init, 0)
            self.w(";")
            if s.test is not None:
                self.space()
                self.expr(s.test, 0)
            self.w(";")
            if s.update is not None:
                self.space()
                self.expr(s.update, 0)
            self.w(")")
            self.body(s.body, "loop")
        elif t is N.Block:
            self.braced(s.body)
        else:
            raise TypeError(f"not a statement: {s!r}")

    def keyword_paren(self, kw: str):
        self.w(kw)
        if self.kw_paren_space:
            self.space()
        self.w("(")

    def var_decl(self, d: N.VarDecl):
        self.w(d.kind)
        for i, dec in enumerate(d.declarations):
            if i:
                self.w(",")
                self.space()
            else:
                self.space()
            self.w(dec.id.name)
            if dec.init is not None:
                self.space()
                self.w("=")
                self.space()
                self.expr(dec.init, P_ASSIGN)

    def braced(self, body: list, *, own_line: bool = False):
        if self.allman and own_line:
            self.newline()
            self.indent()
        elif own_line:
            self.space()
        self.w("{")
        if self.compact:
            for s in body:
                if not isinstance(s, N.Comment):
                    self.statement_inline(s)
            self.w("}")
            return
        if not body:
            self.w("}")
            return
        self.newline()
        self.level += 1
        for s in body:
            self.statement(s)
        self.level -= 1
        self.indent()
        self.w("}")

    def function_body(self, block: N.Block):
        self.braced(block.body, own_line=True)

    def _can_unbrace(self, stmt, position: str) -> bool:
        t = type(stmt)
        if position == "then-with-else":
            return t is N.ExprStmt or t is N.Return or (t is N.VarDecl and stmt.kind == "var")
        if t is N.FunctionDecl or t is N.Block:
            return False
        if t is N.VarDecl and stmt.kind != "var":
            return False
        if position == "else" and t is N.If:
            return False
        return True

    def body(self, block: N.Block, position: str):
        if self.compact:
            real = _real_statements(block)
            if len(real) == 1 and self._can_unbrace(real[0], position):
                self.statement_inline(real[0])
                return
        self.braced(block.body, own_line=True)

    def if_stmt(self, s: N.If):
        self.keyword_paren("if")
        self.expr(s.test, 0)
        self.w(")")
        alt = s.alternate
        self.body(s.consequent, "then" if alt is None else "then-with-else")
        if alt is None:
            return
        if self.allman:
            self.newline()
            self.indent()
        else:
            self.space()
        self.w("else")
        if isinstance(alt, N.If):
            self.space()
            self.if_stmt(alt)
        else:
            self.body(alt, "else")

    def param_list(self, params: list):
        self.w("(")
        for i, p in enumerate(params):
            if i:
                self.w(",")
                self.space()
            self.w(p.name)
        self.w(")")

    # -- expressions -----------------------------------------------------------

    def expr(self, e, min_prec: int):
        if _expr_prec(e) < min_prec:
            self.w("(")
            self.expr_inner(e)
            self.w(")")
        else:
            self.expr_inner(e)

    def expr_inner(self, e):
        t = type(e)
        if t is N.Identifier:
            self.w(e.name)
        elif t is N.NumberLit:
            self.w(js_number_to_string(e.value))
        elif t is N.StringLit:
            self.w(quote_string(e.value))
        elif t is N.BoolLit:
            self.w("true" if e.value else "false")
        elif t is N.NullLit:
            self.w("null")
        elif t is N.UndefinedLit:
            self.w("undefined")
        elif t is N.Binary:
            p = _PREC_BINARY[e.op]
            self.expr(e.left, p)
            self.space()
            self.w(e.op)
            self.space()
            self.expr(e.right, p + 1)
        elif t is N.Unary:
            self.w(e.op)
            if e.op in ("typeof", "void") and not self.compact:
                self.space()
            self.expr(e.argument, P_UNARY)
        elif t is N.Update:
            if e.prefix:
                self.w(e.op)
                self.expr(e.argument, P_CALL)
            else:
                self.expr(e.argument, P_CALL)
                self.w(e.op)
        elif t is N.Assign:
            self.expr(e.target, P_CALL)
            self.space()
            self.w(e.op)
            self.space()
            self.expr(e.value, P_ASSIGN)
        elif t is N.Call:
            self.expr(e.callee, P_CALL)
            self.w("(")
            for i, a in enumerate(e.arguments):
                if i:
                    self.w(",")
                    self.space()
                self.expr(a, P_ASSIGN)
            self.w(")")
        elif t is N.Member:
            obj = e.object
            if isinstance(obj, N.NumberLit):
                self.w("(")
                self.expr_inner(obj)
                self.w(")")
            else:
                self.expr(obj, P_CALL)
            if e.computed:
                self.w("[")
                self.expr(e.property, 0)
                self.w("]")
            else:
                self.w(".")
                self.w(e.property)
        elif t is N.ArrayLit:
            self.w("[")
            for i, a in enumerate(e.elements):
                if i:
                    self.w(",")
                    self.space()
                self.expr(a, P_ASSIGN)
            self.w("]")
        elif t is N.ObjectLit:
            if not e.properties:
                self.w("{}")
                return
            self.w("{")
            self.space()
            for i, p in enumerate(e.properties):
                if i:
                    self.w(",")
                    self.space()
                self.w(p.key if is_identifier_name(p.key) else quote_string(p.key))
                self.w(":")
                self.space()
                self.expr(p.value, P_ASSIGN)
            self.space()
            self.w("}")
        elif t is N.FunctionExpr:
            self.w("function")
            if e.id is not None:
                self.w(e.id.name)
            elif not self.compact and self.style is PrintStyle.BEAUTIFIED:
                self.space()
            self.param_list(e.params)
            self.braced(e.body.body, own_line=True)
        elif t is N.ArrowFunction:
            self.param_list(e.params)
            self.space()
            self.w("=>")
            if isinstance(e.body, N.Block):
                self.space()
                self.braced(e.body.body)
            else:
                self.space()
                if isinstance(_leftmost(e.body), N.ObjectLit):
                    self.w("(")
                    self.expr(e.body, 0)
                    self.w(")")
                else:
                    self.expr(e.body, P_ASSIGN)
        else:
            raise TypeError(f"not an expression: {e!r}")


def print_ast(ast, style: PrintStyle | str = PrintStyle.BEAUTIFIED) -> str:
    """Render a Program (or a single statement/expression) as source text."""
    style = PrintStyle(style)
    p = _Printer(style)
    if isinstance(ast, N.Program):
        return p.program(ast)
    if isinstance(ast, N.STATEMENTS):
        p.statement(ast)
        return "".join(p.out)
    p.expr(ast, 0)
    return "".join(p.out)


def can_be_identifier(name: str) -> bool:
    return is_identifier_name(name) and name not in KEYWORDS
