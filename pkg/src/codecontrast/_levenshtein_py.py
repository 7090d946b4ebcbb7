"""Pure-Python edit distance, used when the compiled kernel is unavailable."""

from __future__ import annotations

from typing import Sequence


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Unit-cost insert/delete/substitute distance between two sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, y in enumerate(b, 1):
            sub = prev[j - 1] + (x != y)
            ins = cur[j - 1] + 1
            dele = prev[j] + 1
            append(min(sub, ins, dele))
        prev = cur
    return prev[-1]
