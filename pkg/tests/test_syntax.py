import pytest
from hypothesis import given, settings, strategies as st

from codecontrast.errors import LexError, ParseError, UnsupportedSyntax
from codecontrast.fuzz import random_program
from codecontrast.syntax import nodes as N
from codecontrast.syntax.lexer import code_tokens, lex
from codecontrast.syntax.parser import parse, parse_expression
from codecontrast.syntax.printer import PrintStyle, js_number_to_string, print_ast
from codecontrast.syntax.scope import analyze

from conftest import MERGE_SORT


def sexpr(e):
    if isinstance(e, N.Binary):
        return f"({e.op} {sexpr(e.left)} {sexpr(e.right)})"
    if isinstance(e, N.Identifier):
        return e.name
    return repr(e)


def test_lex_simple_declaration():
    assert code_tokens("var x = 1;") == ["var", "x", "=", "1", ";"]


def test_lex_comments_not_counted():
    assert code_tokens("var x = 1; // note") == ["var", "x", "=", "1", ";"]
    kinds = [t.kind for t in lex("var x = 1; // note")]
    assert len(kinds) == 6


def test_lex_expression():
    assert code_tokens("W*x + b") == ["W", "*", "x", "+", "b"]


def test_lex_illegal_character_offset():
    with pytest.raises(LexError) as exc:
        lex("var @")
    assert exc.value.offset == 4


def test_parse_precedence_tree():
    assert sexpr(parse_expression("W*x + b")) == "(+ (* W x) b)"


def test_parse_minimal_function():
    prog = parse("function f(){return 1}")
    (fn,) = prog.body
    assert isinstance(fn, N.FunctionDecl) and fn.id.name == "f"
    (ret,) = fn.body.body
    assert isinstance(ret, N.Return) and isinstance(ret.argument, N.NumberLit) and ret.argument.value == 1


def test_class_is_unsupported():
    with pytest.raises(UnsupportedSyntax):
        parse("class A{}")


def test_missing_semicolon_is_a_parse_error():
    with pytest.raises(ParseError):
        parse("var x = 1\nvar y = 2;")


def test_compact_inlines_single_statement_block():
    assert print_ast(parse("if (x) { return 1; }"), PrintStyle.COMPACT) == "if(x)return 1;"


@pytest.mark.parametrize("style", list(PrintStyle))
def test_print_deterministic_and_roundtrips(style):
    prog = parse(MERGE_SORT)
    once = print_ast(prog, style)
    assert once == print_ast(prog, style)
    again = parse(once)
    assert print_ast(N.strip_comments(again), PrintStyle.COMPACT) == print_ast(N.strip_comments(prog), PrintStyle.COMPACT)


@pytest.mark.parametrize("v,text", [(20.0, "20"), (0.5, "0.5"), (1e21, "1e+21"), (-0.0, "0"), (1.5e-7, "1.5e-7")])
def test_number_formatting(v, text):
    assert js_number_to_string(v) == text


def test_scope_resolves_locals_and_marks_free():
    prog = parse(MERGE_SORT)
    an = analyze(prog)
    assert {"Math", "merge"} <= set(an.free)
    for node in N.walk(prog):
        if isinstance(node, N.Identifier) and node.name in ("arr", "middle", "left", "right"):
            assert an.resolve(node) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(list(PrintStyle)))
def test_fuzz_roundtrip(seed, style):
    prog = random_program(seed)
    text = print_ast(prog, style)
    assert print_ast(parse(text), style) == text
