"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``CODECONTRAST_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from array import array
from typing import Hashable, Sequence

from . import _levenshtein_py

BACKEND = "python"
_compiled = None
if os.environ.get("CODECONTRAST_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._ext import levenshtein as _compiled

        BACKEND = "cython"
    except ImportError:
        _compiled = None


def _encode_pair(a: Sequence[Hashable], b: Sequence[Hashable]):
    ids: dict = {}
    ea = array("q", [ids.setdefault(t, len(ids)) for t in a])
    eb = array("q", [ids.setdefault(t, len(ids)) for t in b])
    return ea, eb


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Levenshtein distance between two token sequences (any hashable items)."""
    if _compiled is None:
        return _levenshtein_py.edit_distance(a, b)
    ea, eb = _encode_pair(a, b)
    return _compiled.edit_distance(ea, eb)


def edit_distance_python(a, b) -> int:
    return _levenshtein_py.edit_distance(a, b)


def edit_distance_compiled(a, b) -> int:
    if _compiled is None:
        raise RuntimeError("compiled kernels are not built")
    ea, eb = _encode_pair(a, b)
    return _compiled.edit_distance(ea, eb)
