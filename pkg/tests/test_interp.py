import math

from codecontrast.interp import (DIVERGED, EQUIVALENT, RETURNED, STEP_LIMIT, THREW, check_equivalence, evaluate,
                                 random_inputs)
from codecontrast.syntax.parser import parse

from conftest import MERGE_SORT

MERGE = MERGE_SORT + """
function merge(a, b) {
  const out = [];
  let i = 0, j = 0;
  while (i < a.length && j < b.length) {
    if (a[i] <= b[j]) { out.push(a[i]); i++; } else { out.push(b[j]); j++; }
  }
  return out.concat(a.slice(i)).concat(b.slice(j));
}
"""


def run(src, *args, limit=10_000):
    return evaluate(parse(src), list(args), limit)


def test_constant_expression():
    out = run("function f(){ return (2 + 3) * 4; }")
    assert out.kind == RETURNED and out.python_value == 20


def test_identity():
    assert run("function f(x){return x}", 7).python_value == 7


def test_infinite_loop_hits_step_limit():
    assert run("function f(){while(true){}}").kind == STEP_LIMIT


def test_merge_sort_sorts():
    out = evaluate(parse(MERGE), [[5, 3, 9, 1, 1]], 10_000)
    assert out.python_value == [1, 1, 3, 5, 9]


def test_js_coercions():
    src = 'function f(){ return [1 + "2", "3" * "4", typeof null, 0.1 + 0.2, [] + {}, 7 / 0, -"x"]; }'
    v = run(src).python_value
    assert v[:3] == ["12", 12, "object"]
    assert v[3] == 0.1 + 0.2 and v[4] == "[object Object]" and v[5] == math.inf and math.isnan(v[6])


def test_closures_capture_per_iteration_let():
    src = "function f(){ const fs = []; for (let i = 0; i < 3; i++) { fs.push(() => i); } const out = []; for (let j = 0; j < fs.length; j++) { out.push(fs[j]()); } return out; }"
    assert run(src).python_value == [0, 1, 2]


def test_free_name_throws_without_local_names():
    out = run("function f(secretLocal){ return nope + secretLocal; }", 1)
    assert out.kind == THREW and "nope" in out.message and "secretLocal" not in out.message


def test_tdz_read_throws():
    assert run("function f(){ x; let x = 1; return x; }").kind == THREW


def test_equivalence_reflexive_and_diverged():
    p = parse(MERGE)
    assert check_equivalence(p, p, random_inputs(1, 10, 0), 10_000).status == EQUIVALENT
    v = check_equivalence(parse("function f(){return 1}"), parse("function f(){return 2}"), [()], 100)
    assert v.status == DIVERGED and v.outcome1.python_value == 1 and v.outcome2.python_value == 2


def test_console_log_is_part_of_the_outcome():
    a = parse('function f(){ console.log("a"); return 1; }')
    b = parse("function f(){ return 1; }")
    assert check_equivalence(a, b, [()], 100).status == DIVERGED
