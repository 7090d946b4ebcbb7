"""Tokenizer for the supported JavaScript subset."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError

IDENTIFIER = "identifier"
NUMBER = "number"
STRING = "string"
PUNCTUATOR = "punctuator"
KEYWORD = "keyword"
COMMENT = "comment"

KEYWORDS = frozenset(
    """
    var let const function return if else while for true false null undefined
    typeof void
    class async await new this switch case default try catch finally throw do
    break continue yield import export delete in instanceof of with debugger
    super extends static enum
    """.split()
)

# Longest match first within each leading character.
PUNCTUATORS = sorted(
    """
    { } ( ) [ ] ; , . ... ? ?. ?? : => === !== == != <= >= < > + - * / % **
    ! ~ && || & | ^ << >> >>> = += -= *= /= %= **= ++ -- &= |= ^= <<= >>=
    >>>= &&= ||= ??=
    """.split(),
    key=len,
    reverse=True,
)
_PUNCT_BY_FIRST: dict[str, list[str]] = {}
for _p in PUNCTUATORS:
    _PUNCT_BY_FIRST.setdefault(_p[0], []).append(_p)

_WS = " \t\n\r\v\f\u00a0\ufeff\u2028\u2029"
_DIGITS = "0123456789"
_HEX = "0123456789abcdefABCDEF"


def is_id_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def is_id_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    lexeme: str
    start: int
    end: int
    # Decoded literal value: float for numbers, str for strings and comment bodies.
    value: object = None

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.lexeme!r}, {self.start}:{self.end})"


def _read_string(src: str, i: int) -> tuple[int, str]:
    quote = src[i]
    n = len(src)
    j = i + 1
    out = []
    while True:
        if j >= n:
            raise LexError(i, "unterminated string")
        ch = src[j]
        if ch == quote:
            return j + 1, "".join(out)
        if ch in "\n\r":
            raise LexError(i, "unterminated string")
        if ch == "\\":
            if j + 1 >= n:
                raise LexError(i, "unterminated string")
            esc = src[j + 1]
            j += 2
            if esc == "n":
                out.append("\n")
            elif esc == "t":
                out.append("\t")
            elif esc == "r":
                out.append("\r")
            elif esc == "b":
                out.append("\b")
            elif esc == "f":
                out.append("\f")
            elif esc == "v":
                out.append("\v")
            elif esc == "0" and (j >= n or src[j] not in _DIGITS):
                out.append("\0")
            elif esc == "x":
                hx = src[j:j + 2]
                if len(hx) != 2 or any(c not in _HEX for c in hx):
                    raise LexError(j - 2, "bad escape")
                out.append(chr(int(hx, 16)))
                j += 2
            elif esc == "u":
                hx = src[j:j + 4]
                if len(hx) != 4 or any(c not in _HEX for c in hx):
                    raise LexError(j - 2, "bad escape")
                out.append(chr(int(hx, 16)))
                j += 4
            elif esc == "\n":
                pass  # line continuation
            elif esc in _DIGITS:
                raise LexError(j - 2, "octal escape")
            else:
                out.append(esc)
            continue
        out.append(ch)
        j += 1


def _read_number(src: str, i: int) -> tuple[int, float]:
    n = len(src)
    j = i
    if src.startswith(("0x", "0X"), i):
        j = i + 2
        while j < n and src[j] in _HEX:
            j += 1
        if j == i + 2:
            raise LexError(i, "malformed number")
        if j < n and is_id_part(src[j]):
            raise LexError(j, "malformed number")
        return j, float(int(src[i + 2:j], 16))
    while j < n and src[j] in _DIGITS:
        j += 1
    if j < n and src[j] == ".":
        j += 1
        while j < n and src[j] in _DIGITS:
            j += 1
    if j < n and src[j] in "eE":
        k = j + 1
        if k < n and src[k] in "+-":
            k += 1
        if k < n and src[k] in _DIGITS:
            while k < n and src[k] in _DIGITS:
                k += 1
            j = k
        else:
            raise LexError(j, "malformed number")
    if j < n and is_id_part(src[j]):
        raise LexError(j, "malformed number")
    text = src[i:j]
    if len(text) > 1 and text[0] == "0" and text[1] in _DIGITS:
        raise LexError(i, "legacy octal literal")
    return j, float(text)


def lex(src: str, *, comments: bool = True) -> list[Token]:
    """Split ``src`` into tokens.

    Whitespace is discarded. Comment tokens are kept unless ``comments`` is
    false; their ``value`` is the comment body without delimiters.
    """
    toks: list[Token] = []
    append = toks.append
    n = len(src)
    i = 0
    while i < n:
        ch = src[i]
        if ch in _WS:
            i += 1
            continue
        start = i
        if ch == "/" and i + 1 < n and src[i + 1] == "/":
            j = i + 2
            while j < n and src[j] not in "\n\r\u2028\u2029":
                j += 1
            if comments:
                append(Token(COMMENT, src[i:j], i, j, src[i + 2:j]))
            i = j
            continue
        if ch == "/" and i + 1 < n and src[i + 1] == "*":
            j = src.find("*/", i + 2)
            if j < 0:
                raise LexError(i, "unterminated comment")
            if comments:
                append(Token(COMMENT, src[i:j + 2], i, j + 2, src[i + 2:j]))
            i = j + 2
            continue
        if is_id_start(ch):
            j = i + 1
            while j < n and is_id_part(src[j]):
                j += 1
            word = src[i:j]
            append(Token(KEYWORD if word in KEYWORDS else IDENTIFIER, word, i, j))
            i = j
            continue
        if ch in _DIGITS or (ch == "." and i + 1 < n and src[i + 1] in _DIGITS):
            j, val = _read_number(src, i)
            append(Token(NUMBER, src[i:j], i, j, val))
            i = j
            continue
        if ch == '"' or ch == "'":
            j, val = _read_string(src, i)
            append(Token(STRING, src[i:j], i, j, val))
            i = j
            continue
        cands = _PUNCT_BY_FIRST.get(ch)
        if cands:
            for p in cands:
                if src.startswith(p, i):
                    append(Token(PUNCTUATOR, p, i, i + len(p)))
                    i += len(p)
                    break
            continue
        raise LexError(start)
    return toks


def code_tokens(src: str) -> list[str]:
    """Lexemes of ``src`` with comments and whitespace dropped."""
    return [t.lexeme for t in lex(src, comments=False)]


def normalized(src: str) -> str:
    """Whitespace-normalized rendering: lexemes joined by single spaces."""
    return " ".join(code_tokens(src))
