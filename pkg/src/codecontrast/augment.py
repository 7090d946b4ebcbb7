"""Transform dropout, variant deduplication and corpus-level statistics."""

from __future__ import annotations

import hashlib
import json
import logging
import random
import statistics
import time
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from typing import Iterable, Optional, Sequence

from .errors import CodeContrastError, TransformError
from .kernels import edit_distance
from .syntax import nodes as N
from .syntax.lexer import code_tokens
from .syntax.parser import parse
from .syntax.printer import PrintStyle, print_ast
from .transforms import ProgramForm, TransformId, TransformSpec, apply_in_place

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

DEFAULT_ORDER = ("CF", "DCE", "T", "VR", "IM", "DCI", "LS", "C", "B", "R")
DEFAULT_PROBABILITY = 0.5
DEFAULT_PROBABILITIES = {t: DEFAULT_PROBABILITY for t in DEFAULT_ORDER} | {"LS": 0.25}


def default_specs() -> list[TransformSpec]:
    return [TransformSpec(TransformId(t), DEFAULT_PROBABILITIES[t]) for t in DEFAULT_ORDER]


def specs_from_mapping(mapping: dict, order: Sequence[str] = DEFAULT_ORDER) -> list[TransformSpec]:
    """Specs in ``order`` for every id present in ``mapping``; ids outside ``order`` go last."""
    ids = [t for t in order if t in mapping] + [t for t in mapping if t not in order]
    return [TransformSpec(TransformId(t), float(mapping[t])) for t in ids]


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@lru_cache(maxsize=4096)
def _parse_cached(source: str) -> N.Program:
    return parse(source)


def dedup_key(ast: N.Program) -> str:
    return print_ast(ast, PrintStyle.COMPACT)


@dataclass
class VariantSet:
    base: str
    variants: list = field(default_factory=list)  # base first, then unique variants

    def __len__(self):
        return len(self.variants)

    @property
    def alternatives(self) -> list:
        return self.variants[1:]


def sample_variant(base_ast: N.Program, specs: Sequence[TransformSpec], rng: random.Random,
                   final_style: PrintStyle = PrintStyle.BEAUTIFIED) -> tuple[str, N.Program]:
    """One pass of transform dropout over ``base_ast`` (not mutated)."""
    form = ProgramForm(None, N.clone(base_ast))
    for spec in specs:
        if rng.random() >= spec.probability:
            continue
        try:
            form = apply_in_place(spec.id, form, rng)
        except (TransformError, CodeContrastError) as exc:
            log.debug("skipping %s: %s", spec.id.value, exc)
    if form.source is None:
        form.source = print_ast(form.ast, final_style)
    return form.source, form.ast


def transform_dropout(source: str, specs: Sequence[TransformSpec], n: int, seed: int) -> VariantSet:
    """Up to ``n`` distinct variants of ``source`` (the base included, listed first)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    base_ast = _parse_cached(source)
    seen = {dedup_key(base_ast)}
    out = VariantSet(source, [source])
    active = [s for s in specs if s.probability > 0]
    if not active:
        return out
    for i in range(1, n):
        rng = random.Random(derive_seed(seed, i))
        text, ast = sample_variant(base_ast, active, rng)
        key = dedup_key(ast)
        if key not in seen:
            seen.add(key)
            out.variants.append(text)
    return out


# -- corpus ------------------------------------------------------------------------


def read_jsonl(path) -> Iterable[dict]:
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def _augment_record(args):
    rec, specs, n, seed = args
    rid = str(rec["id"])
    try:
        vs = transform_dropout(rec["source"], specs, n, derive_seed(seed, rid))
    except CodeContrastError as exc:
        return rid, None, f"{type(exc).__name__}: {exc}"
    return rid, {"schema_version": SCHEMA_VERSION, "id": rid, "source": rec["source"],
                 "variants": vs.alternatives}, None


def augment_corpus(in_path, out_path, specs: Sequence[TransformSpec], n: int, seed: int,
                   jobs: int = 1) -> dict:
    """Augment every record of a JSONL corpus; output order follows input order."""
    records = list(read_jsonl(in_path))
    for r in records:
        if "id" not in r or "source" not in r:
            raise ValueError("corpus records need 'id' and 'source' fields")
    tasks = [(r, list(specs), n, seed) for r in records]
    histogram: dict[int, int] = {}
    failures = []
    start = time.perf_counter()
    with open(out_path, "w", encoding="utf-8") as out:
        if jobs > 1 and len(tasks) > 1:
            with Pool(jobs) as pool:
                results = list(pool.imap(_augment_record, tasks, chunksize=max(1, len(tasks) // (jobs * 8))))
        else:
            results = map(_augment_record, tasks)
        for rid, rec, err in results:
            if rec is None:
                failures.append({"id": rid, "error": err})
                continue
            size = 1 + len(rec["variants"])
            histogram[size] = histogram.get(size, 0) + 1
            out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    elapsed = time.perf_counter() - start
    done = sum(histogram.values())
    return {
        "schema_version": SCHEMA_VERSION,
        "methods": done,
        "failed": len(failures),
        "failures": failures[:20],
        "histogram": {str(k): histogram[k] for k in sorted(histogram)},
        "multi_variant_fraction": (sum(v for k, v in histogram.items() if k > 1) / done) if done else 0.0,
        "elapsed_sec": elapsed,
        "samples": done * max(0, n - 1),
    }


# -- dissimilarity ------------------------------------------------------------------


def normalized_tokens(source: str) -> list[str]:
    """Lexemes with comments and whitespace removed."""
    return code_tokens(source)


def token_dissimilarity(xq: str, xk: str) -> float:
    """Token edit distance divided by the longer token count; 0 for identical streams."""
    a, b = normalized_tokens(xq), normalized_tokens(xk)
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return edit_distance(a, b) / longest


def summarize(values: Sequence[float]) -> dict:
    if not values:
        return {"count": 0, "mean": None, "p25": None, "p50": None, "p75": None}
    if len(values) == 1:
        q = [values[0]] * 3
    else:
        q = statistics.quantiles(values, n=4, method="inclusive")
    return {"count": len(values), "mean": statistics.fmean(values), "p25": q[0], "p50": q[1], "p75": q[2]}


def dissimilarity_stats(corpus: Sequence[VariantSet], sample_seed: int,
                        max_pairs: Optional[int] = None) -> dict:
    """Positive pairs (two members of one set) against as many cross-set negative pairs."""
    rng = random.Random(sample_seed)
    histogram: dict[int, int] = {}
    for vs in corpus:
        histogram[len(vs)] = histogram.get(len(vs), 0) + 1
    multi = [vs for vs in corpus if len(vs) >= 2]
    if max_pairs is not None and len(multi) > max_pairs:
        multi = rng.sample(multi, max_pairs)
    positives = []
    for vs in multi:
        a, b = rng.sample(range(len(vs)), 2)
        positives.append(token_dissimilarity(vs.variants[a], vs.variants[b]))
    negatives = []
    if len(corpus) >= 2:
        for _ in range(len(positives)):
            i, j = rng.sample(range(len(corpus)), 2)
            a = rng.choice(corpus[i].variants)
            b = rng.choice(corpus[j].variants)
            negatives.append(token_dissimilarity(a, b))
    total = len(corpus)
    return {
        "schema_version": SCHEMA_VERSION,
        "methods": total,
        "histogram": {str(k): histogram[k] for k in sorted(histogram)},
        "multi_variant_fraction": (len([v for v in corpus if len(v) > 1]) / total) if total else 0.0,
        "positives": summarize(positives),
        "negatives": summarize(negatives),
        "no_positive_pairs": not positives,
        "throughput_methods_per_sec": None,
    }


def load_variant_sets(path) -> list[VariantSet]:
    return [VariantSet(r["source"], [r["source"]] + list(r["variants"])) for r in read_jsonl(path)]


def measure_throughput(sources: Sequence[str], specs: Sequence[TransformSpec], samples: int,
                       seed: int = 0) -> float:
    """Transform-dropout samples per second on the calling core."""
    asts = [_parse_cached(s) for s in sources]
    start = time.perf_counter()
    for i in range(samples):
        rng = random.Random(derive_seed(seed, i))
        text, ast = sample_variant(asts[i % len(asts)], specs, rng)
        dedup_key(ast)
    return samples / (time.perf_counter() - start)
