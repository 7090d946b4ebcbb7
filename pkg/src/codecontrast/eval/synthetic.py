"""Seeded generator of small, realistic programs for desk-scale corpora.

Each family is a parameterised template; identifiers, constants, loop
forms, comments and small structural options are drawn per program so
that members of one family still differ in text and behaviour.
"""

from __future__ import annotations

import json
import random
from typing import Callable

from ..interp import STEP_LIMIT, entry_arity, evaluate, random_inputs
from ..syntax.parser import parse

_VERBS = ("compute", "find", "count", "build", "collect", "sum", "make", "get", "scan", "merge",
          "filter", "check", "format", "reduce", "pick", "apply", "update", "render", "parse", "walk")
_NOUNS = ("items", "values", "list", "data", "nums", "entries", "records", "scores", "parts",
          "words", "rows", "nodes", "keys", "points", "chars", "tokens", "prices", "ages", "sizes", "weights")
_LOCALS = ("total", "result", "acc", "out", "count", "best", "current", "tmp", "index", "cursor",
           "memo", "buffer", "flag", "limit", "step", "value", "item", "pos", "found", "sum")
_COMMENTS = ("// walk the input once", "// keep track of the running value", "// early exit",
             "// edge case: empty input", "/* simple helper */", "// accumulate", "// done")


class _Names:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.used: set = set()

    def _fresh(self, pool, camel=None):
        for _ in range(100):
            name = self.rng.choice(pool)
            if camel:
                name += self.rng.choice(camel).capitalize()
            if self.rng.random() < 0.25:
                name += str(self.rng.randint(1, 9))
            if name not in self.used:
                self.used.add(name)
                return name
        name = f"v{len(self.used)}"
        self.used.add(name)
        return name

    def fn(self):
        return self._fresh(_VERBS, _NOUNS)

    def param(self):
        return self._fresh(_NOUNS)

    def local(self):
        return self._fresh(_LOCALS)


def _comment(rng, indent="  "):
    return f"{indent}{rng.choice(_COMMENTS)}\n" if rng.random() < 0.35 else ""


def _loop(rng, i, arr, body, indent="  "):
    """A for or while loop over ``arr`` indices with body lines already indented one level deeper."""
    if rng.random() < 0.6:
        kw = rng.choice(("let", "var"))
        return f"{indent}for ({kw} {i} = 0; {i} < {arr}.length; {i}++) {{\n{body}{indent}}}\n"
    return (f"{indent}let {i} = 0;\n{indent}while ({i} < {arr}.length) {{\n{body}"
            f"{indent}  {i} += 1;\n{indent}}}\n")


# Each family returns source text for one function declaration.


def fam_sum(rng, n):
    f, a, t, i = n.fn(), n.param(), n.local(), n.local()
    scale = rng.choice(("", f" * {rng.randint(2, 5)}", f" + {rng.randint(1, 9)}"))
    body = f"    {t} += {a}[{i}]{scale};\n"
    return f"function {f}({a}) {{\n{_comment(rng)}  let {t} = 0;\n{_loop(rng, i, a, body)}  return {t};\n}}\n"


def fam_max(rng, n):
    f, a, b, i = n.fn(), n.param(), n.local(), n.local()
    cmp = rng.choice((">", "<"))
    body = f"    if ({a}[{i}] {cmp} {b}) {{\n      {b} = {a}[{i}];\n    }}\n"
    return (f"function {f}({a}) {{\n  if ({a}.length === 0) {{\n    return null;\n  }}\n"
            f"  let {b} = {a}[0];\n{_loop(rng, i, a, body)}  return {b};\n}}\n")


def fam_count_if(rng, n):
    f, a, c, i, k = n.fn(), n.param(), n.local(), n.local(), rng.randint(0, 10)
    cond = rng.choice((f"{a}[{i}] > {k}", f"{a}[{i}] % 2 === 0", f"{a}[{i}] !== {k}", f"{a}[{i}] <= {k}"))
    body = f"    if ({cond}) {{\n      {c}++;\n    }}\n"
    return f"function {f}({a}) {{\n  var {c} = 0;\n{_loop(rng, i, a, body)}  return {c};\n}}\n"


def fam_filter(rng, n):
    f, a, o, i, k = n.fn(), n.param(), n.local(), n.local(), rng.randint(0, 8)
    cond = rng.choice((f"{a}[{i}] >= {k}", f"{a}[{i}] % {rng.randint(2, 4)} === 1", f"{a}[{i}] < {k}"))
    body = f"    if ({cond}) {{\n      {o}.push({a}[{i}]);\n    }}\n"
    return f"function {f}({a}) {{\n  const {o} = [];\n{_loop(rng, i, a, body)}  return {o};\n}}\n"


def fam_map(rng, n):
    f, a, o, i = n.fn(), n.param(), n.local(), n.local()
    expr = rng.choice((f"{a}[{i}] * {a}[{i}]", f"{a}[{i}] + {rng.randint(1, 9)}", f"-{a}[{i}]",
                       f"Math.abs({a}[{i}])", f"{a}[{i}] * {rng.randint(2, 4)} - 1"))
    body = f"    {o}.push({expr});\n"
    return f"function {f}({a}) {{\n  let {o} = [];\n{_loop(rng, i, a, body)}  return {o};\n}}\n"


def fam_reverse_string(rng, n):
    f, s, o, i = n.fn(), n.param(), n.local(), n.local()
    return (f"function {f}({s}) {{\n  {s} = \"\" + {s};\n  let {o} = \"\";\n"
            f"  for (let {i} = {s}.length - 1; {i} >= 0; {i}--) {{\n    {o} += {s}.charAt({i});\n  }}\n"
            f"  return {o};\n}}\n")


def fam_repeat(rng, n):
    f, s, k, o, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    sep = rng.choice(('""', '","', '"-"', '" "'))
    return (f"function {f}({s}, {k}) {{\n{_comment(rng)}  let {o} = [];\n"
            f"  for (let {i} = 0; {i} < Math.min({k}, {rng.randint(3, 8)}); {i}++) {{\n    {o}.push({s});\n  }}\n"
            f"  return {o}.join({sep});\n}}\n")


def fam_factorial(rng, n):
    f, x = n.fn(), n.param()
    cap = rng.randint(8, 15)
    return (f"function {f}({x}) {{\n  if ({x} <= 1 || {x} > {cap}) {{\n    return 1;\n  }}\n"
            f"  return {x} * {f}({x} - 1);\n}}\n")


def fam_fib(rng, n):
    f, x, a, b, t, i = n.fn(), n.param(), n.local(), n.local(), n.local(), n.local()
    return (f"function {f}({x}) {{\n  let {a} = 0, {b} = 1;\n  for (let {i} = 0; {i} < Math.min({x}, 40); {i}++) {{\n"
            f"    const {t} = {a} + {b};\n    {a} = {b};\n    {b} = {t};\n  }}\n  return {a};\n}}\n")


def fam_gcd(rng, n):
    f, x, y, t = n.fn(), n.param(), n.param(), n.local()
    if rng.random() < 0.5:
        return (f"function {f}({x}, {y}) {{\n  {x} = Math.abs(Math.floor({x}));\n  {y} = Math.abs(Math.floor({y}));\n"
                f"  let {t} = 0;\n  while ({y} > 0 && {t} < 100) {{\n    const r = {x} % {y};\n    {x} = {y};\n    {y} = r;\n"
                f"    {t}++;\n  }}\n  return {x};\n}}\n")
    return (f"function {f}({x}, {y}) {{\n  {x} = Math.abs(Math.floor({x}));\n  {y} = Math.abs(Math.floor({y}));\n"
            f"  function step(p, q, d) {{\n    if (q === 0 || d > 50) {{\n      return p;\n    }}\n"
            f"    return step(q, p % q, d + 1);\n  }}\n  return step({x}, {y}, 0);\n}}\n")


def fam_is_prime(rng, n):
    f, x, d = n.fn(), n.param(), n.local()
    return (f"function {f}({x}) {{\n  if ({x} < 2) {{\n    return false;\n  }}\n"
            f"  for (let {d} = 2; {d} * {d} <= {x} && {d} < 1000; {d}++) {{\n"
            f"    if ({x} % {d} === 0) {{\n      return false;\n    }}\n  }}\n  return true;\n}}\n")


def fam_index_of(rng, n):
    f, a, v, i = n.fn(), n.param(), n.param(), n.local()
    body = f"    if ({a}[{i}] === {v}) {{\n      return {i};\n    }}\n"
    return f"function {f}({a}, {v}) {{\n{_loop(rng, i, a, body)}  return -1;\n}}\n"


def fam_average(rng, n):
    f, a, s, i = n.fn(), n.param(), n.local(), n.local()
    body = f"    {s} = {s} + {a}[{i}];\n"
    return (f"function {f}({a}) {{\n  if (!{a}.length) {{\n    return 0;\n  }}\n  let {s} = 0;\n"
            f"{_loop(rng, i, a, body)}  return {s} / {a}.length;\n}}\n")


def fam_clamp(rng, n):
    f, x, lo, hi = n.fn(), n.param(), rng.randint(-10, 0), rng.randint(1, 20)
    if rng.random() < 0.5:
        return f"function {f}({x}) {{\n  return Math.max({lo}, Math.min({hi}, {x}));\n}}\n"
    return (f"function {f}({x}) {{\n  if ({x} < {lo}) {{\n    return {lo};\n  }} else if ({x} > {hi}) {{\n"
            f"    return {hi};\n  }}\n  return {x};\n}}\n")


def fam_object_build(rng, n):
    f, a, b, o = n.fn(), n.param(), n.param(), n.local()
    k1, k2 = rng.sample(("name", "size", "kind", "label", "count", "id"), 2)
    return (f"function {f}({a}, {b}) {{\n  const {o} = {{ {k1}: {a}, {k2}: {b} }};\n"
            f"  {o}.{k1} = {o}.{k2} + {o}.{k1};\n  return [{o}.{k1}, {o}.{k2}];\n}}\n")


def fam_dot(rng, n):
    f, a, b, s, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    return (f"function {f}({a}, {b}) {{\n  let {s} = 0;\n"
            f"  for (let {i} = 0; {i} < Math.min({a}.length, {b}.length); {i}++) {{\n"
            f"    {s} += {a}[{i}] * {b}[{i}];\n  }}\n  return {s};\n}}\n")


def fam_merge_sorted(rng, n):
    f, a, b, o, i, j = n.fn(), n.param(), n.param(), n.local(), n.local(), n.local()
    return (f"function {f}({a}, {b}) {{\n  let {o} = [];\n  let {i} = 0, {j} = 0;\n"
            f"  while ({i} < {a}.length && {j} < {b}.length) {{\n"
            f"    if ({a}[{i}] <= {b}[{j}]) {{\n      {o}.push({a}[{i}]);\n      {i}++;\n    }} else {{\n"
            f"      {o}.push({b}[{j}]);\n      {j}++;\n    }}\n  }}\n"
            f"  return {o}.concat({a}.slice({i})).concat({b}.slice({j}));\n}}\n")


def fam_merge_sort(rng, n):
    f, a, m, l, r = n.fn(), n.param(), n.local(), n.local(), n.local()
    h, x, y, o = n.fn(), n.param(), n.param(), n.local()
    return (f"{_comment(rng, '')}function {f}({a}) {{\n  if ({a}.length <= 1) {{\n    return {a};\n  }}\n"
            f"  const {m} = Math.floor({a}.length / 2);\n  const {l} = {f}({a}.slice(0, {m}));\n"
            f"  const {r} = {f}({a}.slice({m}));\n  return {h}({l}, {r});\n}}\n"
            f"function {h}({x}, {y}) {{\n  const {o} = [];\n"
            f"  while ({x}.length && {y}.length) {{\n    if ({x}[0] <= {y}[0]) {{\n      {o}.push({x}[0]);\n"
            f"      {x} = {x}.slice(1);\n    }} else {{\n      {o}.push({y}[0]);\n      {y} = {y}.slice(1);\n    }}\n  }}\n"
            f"  return {o}.concat({x}, {y});\n}}\n")


def fam_bubble_sort(rng, n):
    f, a, i, j, t, c = n.fn(), n.param(), n.local(), n.local(), n.local(), n.local()
    return (f"function {f}({a}) {{\n  const {c} = {a}.slice();\n"
            f"  for (let {i} = 0; {i} < {c}.length; {i}++) {{\n"
            f"    for (let {j} = 0; {j} + 1 < {c}.length - {i}; {j}++) {{\n"
            f"      if ({c}[{j}] > {c}[{j} + 1]) {{\n        const {t} = {c}[{j}];\n"
            f"        {c}[{j}] = {c}[{j} + 1];\n        {c}[{j} + 1] = {t};\n      }}\n    }}\n  }}\n  return {c};\n}}\n")


def fam_fizzbuzz(rng, n):
    f, k, o, i = n.fn(), n.param(), n.local(), n.local()
    p, q = rng.choice(((3, 5), (2, 7), (3, 4)))
    w1, w2 = rng.choice((("Fizz", "Buzz"), ("Foo", "Bar"), ("Ping", "Pong")))
    return (f"function {f}({k}) {{\n  let {o} = [];\n  for (let {i} = 1; {i} <= Math.min({k}, 30); {i}++) {{\n"
            f"    if ({i} % {p * q} === 0) {{\n      {o}.push(\"{w1}{w2}\");\n    }} else if ({i} % {p} === 0) {{\n"
            f"      {o}.push(\"{w1}\");\n    }} else if ({i} % {q} === 0) {{\n      {o}.push(\"{w2}\");\n"
            f"    }} else {{\n      {o}.push({i});\n    }}\n  }}\n  return {o}.join(\",\");\n}}\n")


def fam_count_char(rng, n):
    f, s, c, t, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    return (f"function {f}({s}, {c}) {{\n  {s} = \"\" + {s};\n  let {t} = 0;\n"
            f"  for (let {i} = 0; {i} < {s}.length; {i}++) {{\n    if ({s}.charAt({i}) == {c}) {{\n      {t} += 1;\n    }}\n  }}\n"
            f"  return {t};\n}}\n")


def fam_palindrome(rng, n):
    f, s, i, j = n.fn(), n.param(), n.local(), n.local()
    return (f"function {f}({s}) {{\n  {s} = (\"\" + {s}).toLowerCase();\n  let {i} = 0;\n  let {j} = {s}.length - 1;\n"
            f"  while ({i} < {j}) {{\n    if ({s}.charAt({i}) !== {s}.charAt({j})) {{\n      return false;\n    }}\n"
            f"    {i}++;\n    {j}--;\n  }}\n  return true;\n}}\n")


def fam_range(rng, n):
    f, a, b, o, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    step = rng.randint(1, 3)
    return (f"function {f}({a}, {b}) {{\n  const {o} = [];\n"
            f"  for (let {i} = {a}; {i} < {b} && {o}.length < 50; {i} += {step}) {{\n    {o}.push({i});\n  }}\n"
            f"  return {o};\n}}\n")


def fam_power(rng, n):
    f, b, e, r, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    return (f"function {f}({b}, {e}) {{\n  let {r} = 1;\n  for (let {i} = 0; {i} < Math.min({e}, 20); {i}++) {{\n"
            f"    {r} *= {b};\n  }}\n  return {r};\n}}\n")


def fam_digits(rng, n):
    f, x, s, d = n.fn(), n.param(), n.local(), n.local()
    base = rng.choice((10, 2, 8))
    return (f"function {f}({x}) {{\n  {x} = Math.abs(Math.floor({x}));\n  let {s} = 0;\n  let {d} = 0;\n"
            f"  while ({x} > 0 && {d} < 64) {{\n    {s} += {x} % {base};\n    {x} = Math.floor({x} / {base});\n"
            f"    {d}++;\n  }}\n  return {s};\n}}\n")


def fam_zip_pairs(rng, n):
    f, a, b, o, i = n.fn(), n.param(), n.param(), n.local(), n.local()
    return (f"function {f}({a}, {b}) {{\n  let {o} = [];\n"
            f"  for (let {i} = 0; {i} < {a}.length && {i} < {b}.length; {i}++) {{\n"
            f"    {o}.push([{a}[{i}], {b}[{i}]]);\n  }}\n  return {o};\n}}\n")


def fam_accumulate_closure(rng, n):
    f, a, add, t, x, i = n.fn(), n.param(), n.local(), n.local(), n.param(), n.local()
    k = rng.randint(1, 5)
    body = f"    {add}({a}[{i}]);\n"
    return (f"function {f}({a}) {{\n  let {t} = {k};\n  const {add} = ({x}) => {{\n    {t} = {t} + {x};\n  }};\n"
            f"{_loop(rng, i, a, body)}  return {t};\n}}\n")


def fam_logger(rng, n):
    f, a, i = n.fn(), n.param(), n.local()
    body = f"    console.log(\"{rng.choice(('item', 'value', 'row'))}\", {a}[{i}]);\n"
    return f"function {f}({a}) {{\n{_loop(rng, i, a, body)}  return {a}.length;\n}}\n"


def fam_unique(rng, n):
    f, a, o, i = n.fn(), n.param(), n.local(), n.local()
    body = f"    if ({o}.indexOf({a}[{i}]) === -1) {{\n      {o}.push({a}[{i}]);\n    }}\n"
    return f"function {f}({a}) {{\n  const {o} = [];\n{_loop(rng, i, a, body)}  return {o};\n}}\n"


def fam_constant(rng, n):
    f = n.fn()
    expr = rng.choice((f"{rng.randint(1, 9)} * {rng.randint(1, 9)}", f"\"{rng.choice(_NOUNS)}\"",
                       str(rng.randint(0, 99)), "true", f"({rng.randint(1, 9)} + {rng.randint(1, 9)}) * 2"))
    return f"function {f}() {{\n  return {expr};\n}}\n"


FAMILIES: dict[str, Callable] = {
    name[4:]: fn for name, fn in sorted(globals().items()) if name.startswith("fam_") and callable(fn)
}
GENERAL_FAMILIES = tuple(k for k in FAMILIES if k != "constant")


def generate_program(rng: random.Random, family: str) -> str:
    return FAMILIES[family](rng, _Names(rng))


def _valid(source: str, seed: int) -> bool:
    try:
        ast = parse(source)
    except Exception:
        return False
    for args in random_inputs(entry_arity(ast), 3, seed):
        if evaluate(ast, args).kind == STEP_LIMIT:
            return False
    return True


def generate_corpus(count: int, seed: int, families=GENERAL_FAMILIES) -> list[dict]:
    """``count`` distinct programs, families cycled in seeded random order."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    records, seen = [], set()
    order = list(families)
    attempts = 0
    while len(records) < count:
        if len(records) % len(order) == 0:
            rng.shuffle(order)
        family = order[len(records) % len(order)]
        source = generate_program(rng, family)
        attempts += 1
        if attempts > count * 50:
            raise RuntimeError("generator could not produce enough distinct programs")
        if source in seen or not _valid(source, seed):
            continue
        seen.add(source)
        records.append({"id": f"m{len(records):05d}", "family": family, "source": source})
    return records


def write_corpus(records, out_path) -> None:
    with open(out_path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def generate_synthetic_corpus(count: int, seed: int, out_path) -> dict:
    records = generate_corpus(count, seed)
    write_corpus(records, out_path)
    families = sorted({r["family"] for r in records})
    return {"count": len(records), "families": len(families), "family_names": families}
