"""Source-to-source augmentation passes.

Each pass maps a program to a program. All of them except line subsampling
keep the observable behaviour (return value, thrown error, log output) of
the program unchanged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..errors import CodeContrastError, TransformError
from ..syntax import nodes as N
from ..syntax.parser import parse
from ..syntax.printer import PrintStyle, print_ast
from .compress import compress
from .dce import eliminate_dead_code
from .insert import insert_dead_code, subsample_lines
from .literals import fold_constants, rewrite_booleans
from .naming import mangle, random_rename


class TransformId(str, Enum):
    R = "R"      # reformat
    B = "B"      # beautify
    C = "C"      # compress
    DCE = "DCE"  # dead-code elimination
    T = "T"      # literal type upconversion
    CF = "CF"    # constant folding
    VR = "VR"    # variable renaming
    IM = "IM"    # identifier mangling
    DCI = "DCI"  # dead-code insertion
    SW = "SW"    # subword regularization (handled by the tokenizer)
    LS = "LS"    # line subsampling


ALL_TRANSFORMS = tuple(TransformId)


def semantics_preserving(tid) -> bool:
    return TransformId(tid) is not TransformId.LS


def requires_ast(tid) -> bool:
    return TransformId(tid) not in (TransformId.SW,)


@dataclass(frozen=True)
class TransformSpec:
    id: TransformId
    probability: float

    def __post_init__(self):
        object.__setattr__(self, "id", TransformId(self.id))
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability must be in [0, 1], got {self.probability}")


@dataclass
class ProgramForm:
    """A program held as source text, as an AST, or both.

    When both are present they agree: ``parse(source)`` equals ``ast`` (minus
    comments for compact output). Keeping the tree around avoids reparsing
    every time a source-level pass hands off to an AST pass.
    """

    source: Optional[str] = None
    ast: Optional[N.Program] = None

    @classmethod
    def from_source(cls, source: str) -> "ProgramForm":
        return cls(source=source)

    @classmethod
    def from_ast(cls, ast: N.Program) -> "ProgramForm":
        return cls(ast=ast)

    def to_ast(self) -> N.Program:
        if self.ast is None:
            self.ast = parse(self.source)
        return self.ast

    def to_source(self, style: PrintStyle = PrintStyle.BEAUTIFIED) -> str:
        """The program text; ``style`` only matters when no text has been produced yet."""
        if self.source is None:
            self.source = print_ast(self.ast, style)
        return self.source


_STYLE = {TransformId.R: PrintStyle.REFORMATTED, TransformId.B: PrintStyle.BEAUTIFIED}

_AST_PASSES = {
    TransformId.DCE: eliminate_dead_code,
    TransformId.T: rewrite_booleans,
    TransformId.CF: fold_constants,
    TransformId.VR: random_rename,
    TransformId.IM: mangle,
    TransformId.DCI: insert_dead_code,
    TransformId.LS: subsample_lines,
}


def apply_in_place(tid: TransformId, form: ProgramForm, rng: random.Random) -> ProgramForm:
    """Like :func:`apply_transform` but may reuse and mutate ``form``'s tree."""
    if tid is TransformId.SW:
        return form
    ast = form.to_ast()
    if tid in _STYLE:
        return ProgramForm(print_ast(ast, _STYLE[tid]), ast)
    if tid is TransformId.C:
        compress(ast, rng)
        return ProgramForm(print_ast(ast, PrintStyle.COMPACT), ast)
    _AST_PASSES[tid](ast, rng)
    return ProgramForm(None, ast)


def apply_transform(tid, form, rng: random.Random) -> ProgramForm:
    """Apply one pass to a program and return a new form; the input is left untouched.

    ``form`` may be a :class:`ProgramForm`, source text or an AST.
    """
    tid = TransformId(tid)
    if isinstance(form, str):
        form = ProgramForm.from_source(form)
    elif isinstance(form, N.Program):
        form = ProgramForm.from_ast(form)
    if tid is TransformId.SW:
        return ProgramForm(form.source, None if form.ast is None else N.clone(form.ast))
    try:
        with N.recursion_headroom():
            work = ProgramForm(None, N.clone(form.to_ast()))
            return apply_in_place(tid, work, rng)
    except CodeContrastError:
        raise
    except (RecursionError, ValueError) as exc:
        raise TransformError(tid.value, str(exc)) from exc


__all__ = [
    "ALL_TRANSFORMS", "ProgramForm", "TransformId", "TransformSpec", "apply_in_place",
    "apply_transform", "compress", "eliminate_dead_code", "fold_constants", "insert_dead_code",
    "mangle", "random_rename", "requires_ast", "rewrite_booleans", "semantics_preserving",
    "subsample_lines",
]
