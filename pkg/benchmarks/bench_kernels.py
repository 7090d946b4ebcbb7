"""Compare the compiled and pure-Python edit-distance kernels on real program token streams.

Usage: python3 benchmarks/bench_kernels.py [--programs 60] [--repeat 3]
"""

from __future__ import annotations

import argparse
import itertools
import json
import time

from codecontrast import kernels
from codecontrast.eval.synthetic import generate_corpus
from codecontrast.syntax.lexer import code_tokens


def _time(fn, pairs, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--programs", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    toks = [code_tokens(r["source"]) for r in generate_corpus(args.programs, seed=0)]
    pairs = list(itertools.combinations(toks, 2))
    for a, b in pairs[:200]:
        assert kernels.edit_distance_python(a, b) == kernels.edit_distance(a, b)
    result = {"pairs": len(pairs), "mean_tokens": sum(map(len, toks)) / len(toks),
              "python_sec": _time(kernels.edit_distance_python, pairs, args.repeat)}
    if kernels.BACKEND == "cython":
        result["cython_sec"] = _time(kernels.edit_distance_compiled, pairs, args.repeat)
        result["speedup"] = result["python_sec"] / result["cython_sec"]
    else:
        result["cython_sec"] = None
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
