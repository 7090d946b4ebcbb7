"""Zero-shot clone detection, adversarial attacks and embedding export."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Optional, Sequence

import numpy as np

from ..augment import (DEFAULT_PROBABILITY, _parse_cached, dedup_key, derive_seed, read_jsonl, sample_variant,
                       token_dissimilarity)
from ..encoder import MEAN, EncoderParams, encode_program, init_params, load_params
from ..errors import CodeContrastError
from ..interp import DIVERGED, check_equivalence, entry_arity, random_inputs
from ..tokenizer import SubwordVocab
from ..transforms import TransformId, TransformSpec
from .metrics import auroc, average_precision, cosine_similarity

SCHEMA_VERSION = 1

ATTACK_POOL = ("R", "B", "C", "DCE", "T", "CF", "VR", "IM")
PRESERVING_ORDER = ("CF", "DCE", "T", "VR", "IM", "DCI", "C", "B", "R")


@dataclass
class ClonePair:
    a: str
    b: str
    label: int
    id: str = ""


def load_pairs(path) -> tuple[list[ClonePair], int]:
    """Pairs whose programs both parse, and the number skipped."""
    pairs, skipped = [], 0
    for n, rec in enumerate(read_jsonl(path)):
        try:
            _parse_cached(rec["a"])
            _parse_cached(rec["b"])
        except CodeContrastError:
            skipped += 1
            continue
        pairs.append(ClonePair(rec["a"], rec["b"], int(rec["label"]), str(rec.get("id", n))))
    return pairs, skipped


# -- scorers -------------------------------------------------------------------------


class EditDistanceScorer:
    name = "edit"

    def score(self, a: str, b: str) -> float:
        return 1.0 - token_dissimilarity(a, b)

    def score_many(self, a: str, bs: Sequence[str]) -> list[float]:
        return [self.score(a, b) for b in bs]


class CosineScorer:
    """Cosine similarity of pooled encoder outputs (deterministic segmentation)."""

    def __init__(self, params: EncoderParams, vocab: SubwordVocab, pooling: str = MEAN,
                 normalize: bool = True, name: str = "cosine"):
        if params.vocab_size != vocab.size:
            raise CodeContrastError(f"encoder expects {params.vocab_size} tokens, vocabulary has {vocab.size}")
        self.params, self.vocab, self.pooling, self.normalize = params, vocab, pooling, normalize
        self.name = name
        self._cache: dict[str, np.ndarray] = {}

    def embed(self, sources: Sequence[str]) -> np.ndarray:
        missing = [s for s in dict.fromkeys(sources) if s not in self._cache]
        if missing:
            # one row at a time: BLAS results can depend on batch shape, and scores must not
            for s in missing:
                self._cache[s] = encode_program(self.params, self.vocab.encode(s), self.pooling, self.normalize)
        return np.stack([self._cache[s] for s in sources]) if sources else np.zeros((0, self.params.dims[2]))

    def score(self, a: str, b: str) -> float:
        ea, eb = self.embed([a, b])
        return cosine_similarity(ea, eb)

    def score_many(self, a: str, bs: Sequence[str]) -> list[float]:
        E = self.embed([a, *bs])
        return [cosine_similarity(E[0], e) for e in E[1:]]


def make_scorer(kind: str, vocab: Optional[SubwordVocab] = None, checkpoint=None, pooling: str = MEAN,
                seed: int = 0):
    if kind in ("edit", "editDistance"):
        return EditDistanceScorer()
    if vocab is None:
        raise CodeContrastError(f"scorer {kind!r} needs a vocabulary")
    if kind == "cosine":
        if checkpoint is None:
            raise CodeContrastError("cosine scorer needs a checkpoint")
        return CosineScorer(load_params(checkpoint), vocab, pooling, name="cosine")
    if kind in ("random", "randomInit"):
        dims = (512, 512, 128)
        if checkpoint is not None:
            dims = load_params(checkpoint).dims
        return CosineScorer(init_params(vocab.size, *dims, seed=seed), vocab, pooling, name="random")
    raise CodeContrastError(f"unknown scorer {kind!r}")


# -- attacks ---------------------------------------------------------------------------


@dataclass
class AttackConfig:
    samples: int = 4
    pool: tuple = ATTACK_POOL
    probability: float = DEFAULT_PROBABILITY
    seed: int = 0
    include_original: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("attack needs at least one sample")
        bad = set(self.pool) - set(ATTACK_POOL)
        if bad:
            raise ValueError(f"attack pool may only hold label-preserving passes, got {sorted(bad)}")

    def specs(self) -> list[TransformSpec]:
        order = [t for t in PRESERVING_ORDER if t in self.pool]
        return [TransformSpec(TransformId(t), self.probability) for t in order]


def attack_candidates(program: str, atk: AttackConfig, pair_id: str) -> list[str]:
    """Candidate rewrites of ``program``; the k-th candidate depends only on (seed, pair, k)."""
    base = _parse_cached(program)
    specs = atk.specs()
    out = [program] if atk.include_original else []
    for k in range(atk.samples):
        rng = random.Random(derive_seed(atk.seed, "attack", pair_id, k))
        try:
            text, _ = sample_variant(base, specs, rng)
        except CodeContrastError:
            continue
        out.append(text)
    return out or [program]


def adversarial_attack(scorer, pair: ClonePair, atk: AttackConfig, minimize: Optional[bool] = None):
    """Rewrite ``pair.b`` to push the score away from the true label; returns (program, score)."""
    if minimize is None:
        minimize = pair.label == 1
    cands = attack_candidates(pair.b, atk, pair.id)
    scores = scorer.score_many(pair.a, cands)
    pick = int(np.argmin(scores) if minimize else np.argmax(scores))
    return cands[pick], float(scores[pick])


# -- evaluation ----------------------------------------------------------------------------


def _report(scorer, pooling, scores, labels, attack_n, used, skipped) -> dict:
    a, se = auroc(scores, labels)
    return {
        "schema_version": SCHEMA_VERSION, "scorer": scorer.name,
        "pooling": pooling if scorer.name != "edit" else None, "attack_n": attack_n,
        "auroc": a, "auroc_se": se, "ap": average_precision(scores, labels),
        "pairs_used": used, "pairs_skipped": skipped,
    }


_WORKER: dict = {}


def _init_worker(scorer, attack, attack_negatives):
    _WORKER.update(scorer=scorer, attack=attack, negatives=attack_negatives)


def _score_pair(p: ClonePair) -> float:
    scorer, attack = _WORKER["scorer"], _WORKER["attack"]
    if attack is not None and (p.label == 1 or _WORKER["negatives"]):
        return adversarial_attack(scorer, p, attack)[1]
    return scorer.score(p.a, p.b)


def clone_eval(scorer, pairs: Sequence[ClonePair], pooling: str = MEAN, attack: Optional[AttackConfig] = None,
               attack_negatives: bool = False, skipped: int = 0, jobs: int = 1) -> tuple[dict, list[dict]]:
    """Score every pair (optionally after attacking it) and summarise with AUROC/AP.

    Each pair's attack seeds depend only on the pair id, so ``jobs`` does not change results.
    """
    if jobs > 1 and len(pairs) > 1:
        with Pool(jobs, initializer=_init_worker, initargs=(scorer, attack, attack_negatives)) as pool:
            scores = list(pool.imap(_score_pair, pairs, chunksize=max(1, len(pairs) // (jobs * 4))))
    else:
        _init_worker(scorer, attack, attack_negatives)
        scores = [_score_pair(p) for p in pairs]
        _WORKER.clear()
    dump = [{"id": p.id, "label": p.label, "score": s} for p, s in zip(pairs, scores)]
    labels = [p.label for p in pairs]
    report = _report(scorer, pooling, scores, labels, attack.samples if attack else 0, len(pairs), skipped)
    return report, dump


# -- benchmark construction -------------------------------------------------------------------


def behaves_differently(a: str, b: str, seed: int, inputs: int = 10) -> bool:
    """True when the two programs disagree on some sampled input (or take different arities)."""
    pa, pb = _parse_cached(a), _parse_cached(b)
    arity = entry_arity(pa)
    if arity != entry_arity(pb):
        return True
    verdict = check_equivalence(pa, pb, random_inputs(arity, inputs, seed), step_limit=10000)
    return verdict.status == DIVERGED


def make_variant_pairs(sources: Sequence[str], seed: int, tries: int = 8) -> list[dict]:
    """One clone pair (two fresh rewrites of one base) and one non-clone pair per base.

    A non-clone partner is a rewrite of a different base that disagrees with
    this one on sampled inputs, so no negative is secretly a clone.
    """
    specs = [TransformSpec(TransformId(t), DEFAULT_PROBABILITY) for t in PRESERVING_ORDER]
    variants = []
    for n, src in enumerate(sources):
        base = _parse_cached(src)
        found, keys = [], set()
        for k in range(tries):
            rng = random.Random(derive_seed(seed, "pairs", n, k))
            text, ast = sample_variant(base, specs, rng)
            key = dedup_key(ast)
            if key not in keys:
                keys.add(key)
                found.append(text)
            if len(found) == 2:
                break
        while len(found) < 2:
            found.append(src)
        variants.append(found)
    pairs = []
    for i, (x, y) in enumerate(variants):
        pairs.append({"schema_version": SCHEMA_VERSION, "id": f"p{i}c", "a": x, "b": y, "label": 1})
        rng = random.Random(derive_seed(seed, "negative", i))
        others = [j for j in range(len(variants)) if j != i]
        rng.shuffle(others)
        j = next((j for j in others if behaves_differently(sources[i], sources[j], derive_seed(seed, i, j))), None)
        if j is None:
            continue
        pairs.append({"schema_version": SCHEMA_VERSION, "id": f"p{i}n", "a": x,
                      "b": variants[j][rng.randrange(2)], "label": 0})
    return pairs


def export_embeddings(params: EncoderParams, vocab: SubwordVocab, corpus_path, out_path,
                      pooling: str = MEAN) -> int:
    """Write one JSON line per program variant; returns the row count."""
    scorer = CosineScorer(params, vocab, pooling)
    rows = 0
    with open(out_path, "w", encoding="utf-8") as out:
        for rec in read_jsonl(corpus_path):
            members = [rec["source"]] + list(rec.get("variants", []))
            E = scorer.embed(members)
            for idx, e in enumerate(E):
                out.write(json.dumps({"id": rec["id"], "variant": idx, "embedding": [float(x) for x in e]}) + "\n")
                rows += 1
    return rows
