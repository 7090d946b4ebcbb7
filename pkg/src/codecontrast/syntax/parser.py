"""Recursive-descent parser for the JavaScript subset.

Statement bodies of ``if``/``while``/``for`` are always stored as Blocks, so
``if (x) return 1;`` and ``if (x) { return 1; }`` parse to the same tree.
Comments at statement positions become :class:`Comment` statements; comments
anywhere else are discarded. Semicolons are mandatory except before ``}`` or
end of input.
"""

from __future__ import annotations

from ..errors import ParseError, UnsupportedSyntax
from . import nodes as N
from .lexer import COMMENT, IDENTIFIER, KEYWORD, NUMBER, PUNCTUATOR, STRING, Token, lex

BINARY_PREC = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3, "===": 3, "!==": 3,
    "<": 4, ">": 4, "<=": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}
_UNSUPPORTED_BINARY = {
    "??": "nullish coalescing", "|": "bitwise operator", "&": "bitwise operator",
    "^": "bitwise operator", "<<": "shift operator", ">>": "shift operator",
    ">>>": "shift operator", "**": "exponent operator", "in": "in operator",
    "instanceof": "instanceof", "?": "conditional expression", ",": "sequence expression",
}
_UNSUPPORTED_ASSIGN = {"**=", "&=", "|=", "^=", "<<=", ">>=", ">>>=", "&&=", "||=", "??="}
_UNSUPPORTED_KEYWORDS = {
    "class", "async", "await", "new", "this", "switch", "case", "default", "try",
    "catch", "finally", "throw", "do", "break", "continue", "yield", "import",
    "export", "delete", "with", "debugger", "super", "extends", "static", "enum",
}
_EOF = Token("eof", "", -1, -1)


class Parser:
    def __init__(self, src: str):
        toks: list[Token] = []
        self.lead: list[list[Token]] = []
        pending: list[Token] = []
        for t in lex(src):
            if t.kind == COMMENT:
                pending.append(t)
            else:
                toks.append(t)
                self.lead.append(pending)
                pending = []
        end = len(src)
        toks.append(Token("eof", "", end, end))
        self.lead.append(pending)
        self.toks = toks
        self.i = 0

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.toks[-1]

    def at(self, lexeme: str) -> bool:
        t = self.toks[self.i]
        return t.lexeme == lexeme and t.kind in (PUNCTUATOR, KEYWORD)

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, lexeme: str) -> Token:
        t = self.tok
        if not self.at(lexeme):
            self.fail(repr(lexeme))
        self.i += 1
        return t

    def fail(self, expected: str):
        t = self.tok
        if t.kind == KEYWORD and t.lexeme in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedSyntax(t.lexeme, t.start)
        if t.kind == PUNCTUATOR and t.lexeme in ("...", "?.", "~"):
            raise UnsupportedSyntax(t.lexeme, t.start)
        raise ParseError(t.start, expected, t.lexeme or "end of input")

    def semicolon(self):
        if self.at(";"):
            self.i += 1
        elif not (self.at("}") or self.tok.kind == "eof"):
            self.fail("';'")

    def identifier(self) -> N.Identifier:
        t = self.tok
        if t.kind != IDENTIFIER:
            if t.kind == PUNCTUATOR and t.lexeme in ("{", "["):
                raise UnsupportedSyntax("destructuring", t.start)
            self.fail("identifier")
        self.i += 1
        return N.Identifier(t.lexeme)

    # -- statements -----------------------------------------------------------

    def program(self) -> N.Program:
        body = self.statements(None)
        return N.Program(body)

    def statements(self, end: str | None) -> list:
        out = []
        while True:
            for c in self.lead[self.i]:
                out.append(N.Comment(c.value, c.lexeme.startswith("/*")))
            t = self.tok
            if end is None:
                if t.kind == "eof":
                    return out
            elif self.at(end):
                self.i += 1
                return out
            elif t.kind == "eof":
                self.fail(repr(end))
            if self.at(";"):
                self.i += 1
                # comments already emitted for this token; point at the next one
                continue
            out.append(self.statement())

    def statement(self):
        t = self.tok
        if t.kind == KEYWORD:
            kw = t.lexeme
            if kw in ("var", "let", "const"):
                decl = self.var_decl()
                self.semicolon()
                return decl
            if kw == "function":
                return self.function_decl()
            if kw == "if":
                return self.if_stmt()
            if kw == "while":
                self.i += 1
                self.expect("(")
                test = self.expression()
                self.expect(")")
                return N.While(test, self.body())
            if kw == "for":
                return self.for_stmt()
            if kw == "return":
                self.i += 1
                arg = None
                if not (self.at(";") or self.at("}") or self.tok.kind == "eof"):
                    arg = self.expression()
                self.semicolon()
                return N.Return(arg)
            if kw in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedSyntax(kw, t.start)
        if self.at("{"):
            self.i += 1
            return N.Block(self.statements("}"))
        expr = self.expression()
        self.semicolon()
        return N.ExprStmt(expr)

    def body(self) -> N.Block:
        t = self.tok
        if self.at("{"):
            self.i += 1
            return N.Block(self.statements("}"))
        if self.at(";"):
            self.i += 1
            return N.Block([])
        if t.kind == KEYWORD and t.lexeme in ("let", "const", "function"):
            raise ParseError(t.start, "statement", t.lexeme)
        return N.Block([self.statement()])

    def var_decl(self) -> N.VarDecl:
        kind = self.advance().lexeme
        decls = []
        while True:
            name = self.identifier()
            init = None
            if self.at("="):
                self.i += 1
                init = self.assignment()
            elif kind == "const":
                self.fail("'=' in const declaration")
            decls.append(N.Declarator(name, init))
            if self.at(","):
                self.i += 1
                continue
            return N.VarDecl(kind, decls)

    def params(self) -> list:
        self.expect("(")
        out = []
        seen = set()
        while not self.at(")"):
            t = self.tok
            ident = self.identifier()
            if ident.name in seen:
                raise UnsupportedSyntax("duplicate parameter", t.start)
            seen.add(ident.name)
            if self.at("="):
                raise UnsupportedSyntax("default parameter", self.tok.start)
            out.append(ident)
            if not self.at(")"):
                self.expect(",")
        self.i += 1
        return out

    def function_body(self) -> N.Block:
        self.expect("{")
        return N.Block(self.statements("}"))

    def function_decl(self) -> N.FunctionDecl:
        self.i += 1
        if self.at("*"):
            raise UnsupportedSyntax("generator", self.tok.start)
        name = self.identifier()
        params = self.params()
        return N.FunctionDecl(name, params, self.function_body())

    def if_stmt(self) -> N.If:
        self.i += 1
        self.expect("(")
        test = self.expression()
        self.expect(")")
        cons = self.body()
        alt = None
        if self.at("else"):
            self.i += 1
            if self.at("if"):
                alt = self.if_stmt()
            else:
                alt = self.body()
        return N.If(test, cons, alt)

    def for_stmt(self) -> N.For:
        self.i += 1
        self.expect("(")
        init = None
        if self.at("var") or self.at("let") or self.at("const"):
            init = self.var_decl()
        elif not self.at(";"):
            init = self.expression()
        if self.at("of") or self.at("in"):
            raise UnsupportedSyntax(f"for-{self.tok.lexeme}", self.tok.start)
        self.expect(";")
        test = None if self.at(";") else self.expression()
        self.expect(";")
        update = None if self.at(")") else self.expression()
        self.expect(")")
        return N.For(init, test, update, self.body())

    # -- expressions ----------------------------------------------------------

    def expression(self):
        e = self.assignment()
        if self.at(","):
            raise UnsupportedSyntax("sequence expression", self.tok.start)
        return e

    def _arrow_ahead(self) -> bool:
        t = self.tok
        if t.kind == IDENTIFIER:
            return self.peek().lexeme == "=>"
        if not self.at("("):
            return False
        depth = 0
        j = self.i
        toks = self.toks
        while j < len(toks):
            lx = toks[j].lexeme
            if toks[j].kind == PUNCTUATOR:
                if lx in ("(", "[", "{"):
                    depth += 1
                elif lx in (")", "]", "}"):
                    depth -= 1
                    if depth == 0:
                        return j + 1 < len(toks) and toks[j + 1].lexeme == "=>"
            elif toks[j].kind == "eof":
                return False
            j += 1
        return False

    def arrow(self) -> N.ArrowFunction:
        if self.tok.kind == IDENTIFIER:
            params = [self.identifier()]
        else:
            params = self.params()
        self.expect("=>")
        if self.at("{"):
            body = self.function_body()
        else:
            body = self.assignment()
        return N.ArrowFunction(params, body)

    def assignment(self):
        if self._arrow_ahead():
            return self.arrow()
        start = self.tok
        left = self.binary(1)
        t = self.tok
        if t.kind == PUNCTUATOR:
            if t.lexeme in ASSIGN_OPS:
                if not isinstance(left, (N.Identifier, N.Member)):
                    raise ParseError(start.start, "assignable target")
                self.i += 1
                return N.Assign(t.lexeme, left, self.assignment())
            if t.lexeme in _UNSUPPORTED_ASSIGN:
                raise UnsupportedSyntax(f"{t.lexeme} operator", t.start)
            if t.lexeme == "?":
                raise UnsupportedSyntax("conditional expression", t.start)
        return left

    def binary(self, min_prec: int):
        left = self.unary()
        while True:
            t = self.tok
            if t.kind not in (PUNCTUATOR, KEYWORD):
                return left
            op = t.lexeme
            prec = BINARY_PREC.get(op)
            if prec is None:
                if op in _UNSUPPORTED_BINARY and op not in (",", "?"):
                    raise UnsupportedSyntax(_UNSUPPORTED_BINARY[op], t.start)
                return left
            if prec < min_prec:
                return left
            self.i += 1
            right = self.binary(prec + 1)
            left = N.Binary(op, left, right)

    def unary(self):
        t = self.tok
        lx = t.lexeme
        if t.kind == PUNCTUATOR:
            if lx in ("!", "-", "+"):
                self.i += 1
                return N.Unary(lx, self.unary())
            if lx in ("++", "--"):
                self.i += 1
                arg = self.unary()
                if not isinstance(arg, (N.Identifier, N.Member)):
                    raise ParseError(t.start, "assignable target")
                return N.Update(lx, True, arg)
            if lx == "~":
                raise UnsupportedSyntax("bitwise operator", t.start)
        elif t.kind == KEYWORD and lx in ("typeof", "void"):
            self.i += 1
            return N.Unary(lx, self.unary())
        expr = self.call_member()
        t = self.tok
        if t.kind == PUNCTUATOR and t.lexeme in ("++", "--"):
            if not isinstance(expr, (N.Identifier, N.Member)):
                raise ParseError(t.start, "assignable target")
            self.i += 1
            return N.Update(t.lexeme, False, expr)
        return expr

    def call_member(self):
        e = self.primary()
        while True:
            t = self.tok
            if t.kind != PUNCTUATOR:
                return e
            lx = t.lexeme
            if lx == ".":
                self.i += 1
                name = self.tok
                if name.kind not in (IDENTIFIER, KEYWORD):
                    self.fail("property name")
                self.i += 1
                e = N.Member(e, name.lexeme, False)
            elif lx == "[":
                self.i += 1
                prop = self.expression()
                self.expect("]")
                e = N.Member(e, prop, True)
            elif lx == "(":
                self.i += 1
                args = []
                while not self.at(")"):
                    if self.at("..."):
                        raise UnsupportedSyntax("spread", self.tok.start)
                    args.append(self.assignment())
                    if not self.at(")"):
                        self.expect(",")
                self.i += 1
                e = N.Call(e, args)
            elif lx == "?.":
                raise UnsupportedSyntax("optional chaining", t.start)
            else:
                return e

    def primary(self):
        t = self.tok
        k = t.kind
        if k == NUMBER:
            self.i += 1
            return N.NumberLit(t.value)
        if k == STRING:
            self.i += 1
            return N.StringLit(t.value)
        if k == IDENTIFIER:
            self.i += 1
            return N.Identifier(t.lexeme)
        if k == KEYWORD:
            lx = t.lexeme
            if lx == "true" or lx == "false":
                self.i += 1
                return N.BoolLit(lx == "true")
            if lx == "null":
                self.i += 1
                return N.NullLit()
            if lx == "undefined":
                self.i += 1
                return N.UndefinedLit()
            if lx == "function":
                self.i += 1
                if self.at("*"):
                    raise UnsupportedSyntax("generator", self.tok.start)
                name = self.identifier() if self.tok.kind == IDENTIFIER else None
                params = self.params()
                return N.FunctionExpr(name, params, self.function_body())
            if lx in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedSyntax(lx, t.start)
        if k == PUNCTUATOR:
            lx = t.lexeme
            if lx == "(":
                self.i += 1
                e = self.expression()
                self.expect(")")
                return e
            if lx == "[":
                return self.array()
            if lx == "{":
                return self.object()
        self.fail("expression")

    def array(self) -> N.ArrayLit:
        self.i += 1
        elems = []
        while not self.at("]"):
            if self.at(","):
                raise UnsupportedSyntax("array hole", self.tok.start)
            if self.at("..."):
                raise UnsupportedSyntax("spread", self.tok.start)
            elems.append(self.assignment())
            if not self.at("]"):
                self.expect(",")
        self.i += 1
        return N.ArrayLit(elems)

    def object(self) -> N.ObjectLit:
        self.i += 1
        props = []
        keys = set()
        while not self.at("}"):
            t = self.tok
            if t.kind in (IDENTIFIER, KEYWORD):
                key = t.lexeme
            elif t.kind == STRING:
                key = t.value
            elif t.kind == NUMBER:
                from .printer import js_number_to_string

                key = js_number_to_string(t.value)
            elif self.at("["):
                raise UnsupportedSyntax("computed property", t.start)
            elif self.at("..."):
                raise UnsupportedSyntax("spread", t.start)
            else:
                self.fail("property name")
            self.i += 1
            if self.at(":"):
                self.i += 1
                value = self.assignment()
            elif self.at("(") :
                raise UnsupportedSyntax("method shorthand", self.tok.start)
            elif t.kind == IDENTIFIER and (self.at(",") or self.at("}")):
                value = N.Identifier(key)
            else:
                self.fail("':'")
            if key in keys:
                raise UnsupportedSyntax("duplicate property", t.start)
            keys.add(key)
            props.append(N.Property(key, value))
            if not self.at("}"):
                self.expect(",")
        self.i += 1
        return N.ObjectLit(props)


def parse(src: str) -> N.Program:
    """Parse ``src`` into a Program tree.

    Raises LexError, ParseError, or UnsupportedSyntax (also for nesting too deep to handle).
    """
    try:
        with N.recursion_headroom():
            return Parser(src).program()
    except RecursionError:
        raise UnsupportedSyntax("nesting too deep") from None


def parse_expression(src: str):
    p = Parser(src)
    try:
        with N.recursion_headroom():
            e = p.expression()
    except RecursionError:
        raise UnsupportedSyntax("nesting too deep") from None
    if p.tok.kind != "eof":
        p.fail("end of input")
    return e
