"""Lexer, parser, AST and printer for the supported JavaScript subset."""

from .lexer import Token, lex, code_tokens, normalized
from .nodes import Program, clone, strip_comments, walk
from .parser import parse, parse_expression
from .printer import PrintStyle, print_ast, js_number_to_string

__all__ = [
    "Token", "lex", "code_tokens", "normalized", "Program", "clone", "strip_comments",
    "walk", "parse", "parse_expression", "PrintStyle", "print_ast", "js_number_to_string",
]
