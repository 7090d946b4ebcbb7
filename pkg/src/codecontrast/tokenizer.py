"""Unigram-LM subword tokenizer with sampled segmentations.

Text is whitespace-normalised and every space becomes the marker ``▁``
(a leading one is added), so decoding is a plain concatenation. Input is
pre-split into word/punctuation segments and pieces never cross segment
boundaries, which keeps lattices short.

Training follows the usual recipe: seed with frequent substrings, run EM
over segmentation lattices, prune the pieces whose removal costs the least
likelihood, repeat until the target size is reached. Single characters of
the training alphabet are never pruned, so any text over that alphabet
encodes losslessly.
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DecodeError, VocabError

PAD, UNK, BOS, EOS = 0, 1, 2, 3
RESERVED = ("<pad>", "<unk>", "<s>", "</s>")
SPACE = "▁"
MAX_PIECE_LEN = 16
DEFAULT_ALPHA = 0.1
_HEADER = "#codecontrast-unigram"
_SEGMENT = re.compile(r"▁?(?:[\w$]+|[^\w$▁]+)|▁")
_UNK_PENALTY = 10.0


def normalize(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim the ends."""
    return " ".join(text.split())


def to_marked(text: str) -> str:
    text = normalize(text)
    return SPACE + text.replace(" ", SPACE) if text else ""


def segments(text: str) -> list[str]:
    return _SEGMENT.findall(to_marked(text))


def _logsumexp(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@dataclass
class SubwordVocab:
    pieces: list  # [(piece, logprob)] in id order, starting at id len(RESERVED)
    index: dict = field(default_factory=dict, repr=False)
    max_len: int = 1
    _lattice_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {p: i + len(RESERVED) for i, (p, _) in enumerate(self.pieces)}
        self.logp = [0.0] * len(RESERVED) + [lp for _, lp in self.pieces]
        self.max_len = max((len(p) for p, _ in self.pieces), default=1)
        self.unk_logp = (min(self.logp[len(RESERVED):], default=0.0)) - _UNK_PENALTY

    @property
    def size(self) -> int:
        return len(RESERVED) + len(self.pieces)

    def piece(self, i: int) -> str:
        if not 0 <= i < self.size:
            raise DecodeError(f"token id {i} out of range for vocabulary of size {self.size}")
        return RESERVED[i] if i < len(RESERVED) else self.pieces[i - len(RESERVED)][0]

    # -- lattices ---------------------------------------------------------------

    def lattice(self, seg: str) -> list:
        """``ends[j]`` lists ``(start, id, logp)`` for every piece ending at offset ``j``."""
        hit = self._lattice_cache.get(seg)
        if hit is not None:
            return hit
        n = len(seg)
        ends = [[] for _ in range(n + 1)]
        index, logp = self.index, self.logp
        for i in range(n):
            top = min(n, i + self.max_len)
            found_single = False
            for j in range(i + 1, top + 1):
                pid = index.get(seg[i:j])
                if pid is not None:
                    ends[j].append((i, pid, logp[pid]))
                    if j == i + 1:
                        found_single = True
            if not found_single:
                ends[i + 1].append((i, UNK, self.unk_logp))
        if len(self._lattice_cache) < 200_000:
            self._lattice_cache[seg] = ends
        return ends

    def _viterbi_segment(self, seg: str) -> list[int]:
        ends = self.lattice(seg)
        n = len(seg)
        best = [-math.inf] * (n + 1)
        back = [None] * (n + 1)
        best[0] = 0.0
        for j in range(1, n + 1):
            for i, pid, lp in ends[j]:
                s = best[i] + lp
                if s > best[j]:
                    best[j] = s
                    back[j] = (i, pid)
        out = []
        j = n
        while j > 0:
            i, pid = back[j]
            out.append(pid)
            j = i
        out.reverse()
        return out

    def _sample_segment(self, seg: str, alpha: float, rng: random.Random) -> list[int]:
        ends = self.lattice(seg)
        n = len(seg)
        fwd = [-math.inf] * (n + 1)
        fwd[0] = 0.0
        for j in range(1, n + 1):
            acc = -math.inf
            for i, _, lp in ends[j]:
                acc = _logsumexp(acc, fwd[i] + alpha * lp)
            fwd[j] = acc
        out = []
        j = n
        while j > 0:
            cands = ends[j]
            weights = [math.exp(fwd[i] + alpha * lp - fwd[j]) for i, _, lp in cands]
            r = rng.random() * sum(weights)
            k = 0
            for k, w in enumerate(weights):
                r -= w
                if r <= 0:
                    break
            i, pid, _ = cands[k]
            out.append(pid)
            j = i
        out.reverse()
        return out

    # -- public API -----------------------------------------------------------------

    def encode(self, text: str, mode: str = "best", alpha: float = DEFAULT_ALPHA,
               seed: Optional[int] = None, rng: Optional[random.Random] = None,
               add_special: bool = True) -> list[int]:
        """Token ids for ``text``; ``mode`` is ``"best"`` (Viterbi) or ``"sample"``."""
        if mode == "sample" and rng is None:
            rng = random.Random(seed)
        ids = [BOS] if add_special else []
        for seg in segments(text):
            if mode == "best":
                ids.extend(self._viterbi_segment(seg))
            elif mode == "sample":
                ids.extend(self._sample_segment(seg, alpha, rng))
            else:
                raise ValueError(f"unknown encoding mode {mode!r}")
        if add_special:
            ids.append(EOS)
        return ids

    def decode(self, ids: Sequence[int]) -> str:
        parts = []
        for i in ids:
            p = self.piece(int(i))
            if i == UNK:
                parts.append("�")
            elif i >= len(RESERVED):
                parts.append(p)
        return "".join(parts).replace(SPACE, " ").lstrip(" ")

    def segmentation_logprob(self, ids: Sequence[int]) -> float:
        return sum(self.logp[i] if i != UNK else self.unk_logp for i in ids if i >= len(RESERVED) or i == UNK)

    # -- persistence ---------------------------------------------------------------

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"{_HEADER} v1 size={self.size} pad={PAD} unk={UNK} bos={BOS} eos={EOS}\n")
            for p, lp in self.pieces:
                f.write(f"{p}\t{lp!r}\n")

    @classmethod
    def load(cls, path) -> "SubwordVocab":
        with open(path, encoding="utf-8") as f:
            header = f.readline()
            if not header.startswith(_HEADER):
                raise VocabError(f"{path}: not a vocabulary file")
            fields = dict(kv.split("=", 1) for kv in header.split()[2:])
            if (int(fields["pad"]), int(fields["unk"]), int(fields["bos"]), int(fields["eos"])) != (PAD, UNK, BOS, EOS):
                raise VocabError(f"{path}: unexpected reserved ids")
            pieces = []
            for line in f:
                line = line.rstrip("\n")
                if line:
                    p, lp = line.rsplit("\t", 1)
                    pieces.append((p, float(lp)))
        vocab = cls(pieces)
        if vocab.size != int(fields["size"]):
            raise VocabError(f"{path}: header says {fields['size']} entries, found {vocab.size}")
        return vocab


# -- training ----------------------------------------------------------------------------


def _expected_counts(seg_counts: dict, vocab: SubwordVocab) -> tuple[Counter, float]:
    counts: Counter = Counter()
    total_ll = 0.0
    for seg, c in seg_counts.items():
        ends = vocab.lattice(seg)
        n = len(seg)
        fwd = [-math.inf] * (n + 1)
        fwd[0] = 0.0
        for j in range(1, n + 1):
            acc = -math.inf
            for i, _, lp in ends[j]:
                acc = _logsumexp(acc, fwd[i] + lp)
            fwd[j] = acc
        bwd = [-math.inf] * (n + 1)
        bwd[n] = 0.0
        for j in range(n, 0, -1):
            if bwd[j] == -math.inf:
                continue
            for i, pid, lp in ends[j]:
                bwd[i] = _logsumexp(bwd[i], bwd[j] + lp)
        z = fwd[n]
        total_ll += c * z
        for j in range(1, n + 1):
            for i, pid, lp in ends[j]:
                if pid != UNK:
                    counts[pid] += c * math.exp(fwd[i] + lp + bwd[j] - z)
    return counts, total_ll


def _normalize_logprobs(weights: dict) -> dict:
    total = sum(weights.values())
    return {p: math.log(w / total) for p, w in weights.items()}


def _build(logprobs: dict) -> SubwordVocab:
    ordered = sorted(logprobs.items(), key=lambda kv: (-kv[1], kv[0]))
    return SubwordVocab([(p, lp) for p, lp in ordered])


def _em(seg_counts, logprobs, iterations):
    vocab = _build(logprobs)
    for _ in range(iterations):
        counts, _ = _expected_counts(seg_counts, vocab)
        weights = {}
        for p, lp in logprobs.items():
            weights[p] = counts.get(vocab.index[p], 0.0) + 1e-3
        logprobs = _normalize_logprobs(weights)
        vocab = _build(logprobs)
    return logprobs, vocab


def train_vocab(texts: Iterable[str], size: int = 8000, seed_pieces: Optional[int] = None,
                em_iterations: int = 2, shrink: float = 0.75) -> SubwordVocab:
    """Train a unigram vocabulary of at most ``size`` entries (reserved ids included).

    Deterministic for a fixed corpus: ties are broken lexicographically.
    """
    seg_counts: Counter = Counter()
    for t in texts:
        seg_counts.update(segments(t))
    if not seg_counts:
        raise VocabError("cannot train a vocabulary on an empty corpus")
    alphabet = sorted({ch for seg in seg_counts for ch in seg})
    budget = size - len(RESERVED)
    if budget < len(alphabet):
        raise VocabError(f"vocabulary size {size} is below alphabet size {len(alphabet)} plus {len(RESERVED)} reserved ids")

    char_freq: Counter = Counter()
    sub_freq: Counter = Counter()
    for seg, c in seg_counts.items():
        n = len(seg)
        for i in range(n):
            char_freq[seg[i]] += c
            for j in range(i + 2, min(n, i + MAX_PIECE_LEN) + 1):
                sub_freq[seg[i:j]] += c
    seed_pieces = seed_pieces or max(4 * budget, 2000)
    ranked = sorted(((f * len(s), s) for s, f in sub_freq.items() if f > 1 or len(seg_counts) == 1),
                    key=lambda x: (-x[0], x[1]))
    weights = {ch: float(char_freq[ch]) for ch in alphabet}
    for score, s in ranked[: max(0, seed_pieces - len(alphabet))]:
        weights[s] = float(sub_freq[s])
    logprobs = _normalize_logprobs(weights)
    chars = set(alphabet)

    logprobs, vocab = _em(seg_counts, logprobs, em_iterations)
    while len(logprobs) > budget:
        target = max(budget, int(len(logprobs) * shrink))
        # Pieces used by the Viterbi segmentations and how often.
        usage: Counter = Counter()
        for seg, c in seg_counts.items():
            for pid in vocab._viterbi_segment(seg):
                usage[pid] += c
        scored = []
        for p, lp in logprobs.items():
            if p in chars:
                continue
            freq = usage.get(vocab.index[p], 0)
            if freq == 0:
                loss = 0.0
            else:
                alt = _alternative_logprob(p, vocab)
                loss = freq * (lp - alt)
            scored.append((loss, p))
        scored.sort(key=lambda x: (-x[0], x[1]))
        keep_multi = target - len(chars)
        kept = {p for _, p in scored[:keep_multi]} | chars
        logprobs = _normalize_logprobs({p: math.exp(logprobs[p]) for p in sorted(kept)})
        logprobs, vocab = _em(seg_counts, logprobs, em_iterations)
    return vocab


def _alternative_logprob(piece: str, vocab: SubwordVocab) -> float:
    """Best log-probability of ``piece`` segmented without using itself."""
    n = len(piece)
    pid_self = vocab.index[piece]
    best = [-math.inf] * (n + 1)
    best[0] = 0.0
    index, logp = vocab.index, vocab.logp
    for j in range(1, n + 1):
        for i in range(max(0, j - vocab.max_len), j):
            pid = index.get(piece[i:j])
            if pid is None or pid == pid_self:
                continue
            s = best[i] + logp[pid]
            if s > best[j]:
                best[j] = s
    return best[n]
