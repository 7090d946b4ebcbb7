"""Momentum-contrast pre-training: InfoNCE, EMA key encoder, FIFO negative queue."""

from __future__ import annotations

import json
import logging
import os
import random
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from .augment import derive_seed, read_jsonl
from .checkpoint import load_arrays, save_arrays
from .encoder import (MAX, MEAN, PARAM_NAMES, EncoderParams, backward_batch, encode_batch, init_params,
                      params_meta, save_params)
from .errors import ConfigError, DataError, DimensionMismatch
from .tokenizer import DEFAULT_ALPHA, SubwordVocab

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


# -- loss ------------------------------------------------------------------------------


def info_nce(q: np.ndarray, k_pos: np.ndarray, negatives, t: float):
    """Loss, d/dq and d/dk+ for one query; the negatives are treated as constants."""
    q = np.asarray(q, dtype=np.float64)
    k_pos = np.asarray(k_pos, dtype=np.float64)
    negs = np.asarray(negatives, dtype=np.float64).reshape(-1, q.shape[0]) if len(negatives) else np.zeros((0, q.shape[0]))
    if q.shape != k_pos.shape or (negs.size and negs.shape[1] != q.shape[0]):
        raise DimensionMismatch("query, key and negatives must share one dimension")
    if t <= 0:
        raise ConfigError("temperature must be positive")
    logits = np.concatenate([[q @ k_pos], negs @ q]) / t
    top = logits.max()
    lse = top + np.log(np.exp(logits - top).sum())
    p = np.exp(logits - lse)
    loss = float(lse - logits[0])
    dq = ((p[0] - 1.0) * k_pos + p[1:] @ negs) / t
    dk = (p[0] - 1.0) * q / t
    return loss, dq, dk


def info_nce_batch(Q: np.ndarray, K: np.ndarray, negatives: np.ndarray, t: float,
                   mask: Optional[np.ndarray] = None):
    """Mean loss over the batch, its gradient w.r.t. ``Q`` and positive-retrieval accuracy.

    ``mask[i, j]`` set to True removes negative ``j`` from row ``i``'s softmax.
    """
    B = Q.shape[0]
    pos = (Q * K).sum(axis=1, keepdims=True) / t
    neg = Q @ negatives.T / t if negatives.size else np.zeros((B, 0))
    if mask is not None and neg.size:
        neg = np.where(mask, -np.inf, neg)
    logits = np.concatenate([pos, neg], axis=1)
    top = logits.max(axis=1, keepdims=True)
    ex = np.exp(logits - top)
    lse = top[:, 0] + np.log(ex.sum(axis=1))
    loss = float(np.mean(lse - logits[:, 0]))
    P = ex / ex.sum(axis=1, keepdims=True)
    dQ = ((P[:, :1] - 1.0) * K + (P[:, 1:] @ negatives if negatives.size else 0.0)) / (t * B)
    if neg.shape[1]:
        acc = float(np.mean(pos[:, 0] > neg.max(axis=1)))
    else:
        acc = 1.0
    return loss, dQ, acc


# -- EMA and queue -------------------------------------------------------------------------


def ema_update(theta_k: EncoderParams, theta_q: EncoderParams, m: float, out: Optional[EncoderParams] = None):
    """``theta_k <- m * theta_k + (1 - m) * theta_q`` blockwise; in place when ``out is theta_k``."""
    theta_k.check_like(theta_q)
    target = out if out is not None else theta_k.copy()
    for name in PARAM_NAMES:
        k, q = getattr(theta_k, name), getattr(theta_q, name)
        dst = getattr(target, name)
        if m == 0.0:
            dst[...] = q
        else:
            np.multiply(k, m, out=dst)
            dst += (1.0 - m) * q
    return target


class NegativeQueue:
    """Fixed-capacity FIFO of key embeddings tagged with the base program they came from."""

    def __init__(self, capacity: int, dim: int):
        self.capacity = capacity
        self.keys = np.zeros((capacity, dim))
        self.owner = np.full(capacity, -1, dtype=np.int64)
        self.born = np.full(capacity, -1, dtype=np.int64)
        self.ptr = 0
        self.fill = 0

    def enqueue(self, keys: np.ndarray, owners: Sequence[int], step: int) -> None:
        for key, owner in zip(keys, owners):
            self.keys[self.ptr] = key
            self.owner[self.ptr] = owner
            self.born[self.ptr] = step
            self.ptr = (self.ptr + 1) % self.capacity
            self.fill = min(self.fill + 1, self.capacity)

    def contents(self) -> tuple[np.ndarray, np.ndarray]:
        if self.fill < self.capacity:
            return self.keys[: self.fill], self.owner[: self.fill]
        return self.keys, self.owner

    def oldest_step(self) -> int:
        born = self.born[: self.fill] if self.fill < self.capacity else self.born
        return int(born.min()) if born.size else -1


# -- configuration and state ----------------------------------------------------------------


@dataclass
class TrainConfig:
    temperature: float = 0.07
    momentum: float = 0.999
    batch_size: int = 32
    queue_size: int = 512
    refill: int = 8
    steps: int = 2000
    lr: float = 0.2
    warmup_steps: int = 100
    sgd_momentum: float = 0.9
    seed: int = 0
    pooling: str = MEAN
    normalize: bool = True
    d_tok: int = 512
    d_hid: int = 512
    d_out: int = 128
    alpha: float = DEFAULT_ALPHA
    mask_same_base: bool = True
    checkpoint_every: int = 500

    def validate(self) -> "TrainConfig":
        if self.temperature <= 0:
            raise ConfigError("temperature must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError("momentum must be in [0, 1)")
        if not 1 <= self.refill <= self.batch_size:
            raise ConfigError(f"refill must be in [1, batch_size], got {self.refill}")
        if self.queue_size < self.batch_size:
            raise ConfigError("queue_size must be at least batch_size")
        if self.pooling not in (MEAN, MAX):
            raise ConfigError(f"pooling must be 'mean' or 'max', got {self.pooling!r}")
        if self.steps < 0 or self.batch_size < 1:
            raise ConfigError("steps must be >= 0 and batch_size >= 1")
        return self

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown training options: {sorted(unknown)}")
        return cls(**d)


@dataclass
class StepReport:
    step: int
    loss: float
    acc: float
    queue_fill: int
    lr: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class TrainState:
    q: EncoderParams
    k: EncoderParams
    queue: NegativeQueue
    velocity: dict = field(default_factory=dict)
    step: int = 0

    @classmethod
    def fresh(cls, vocab_size: int, cfg: TrainConfig) -> "TrainState":
        q = init_params(vocab_size, cfg.d_tok, cfg.d_hid, cfg.d_out, seed=cfg.seed)
        vel = {name: np.zeros_like(getattr(q, name)) for name in PARAM_NAMES}
        return cls(q, q.copy(), NegativeQueue(cfg.queue_size, cfg.d_out), vel, 0)


def learning_rate(cfg: TrainConfig, step: int) -> float:
    if cfg.warmup_steps > 0 and step < cfg.warmup_steps:
        return cfg.lr * (step + 1) / cfg.warmup_steps
    return cfg.lr


def _sgd(state: TrainState, grads, lr: float, mu: float) -> None:
    q, v = state.q, state.velocity
    vE = v["E"]
    vE *= mu
    vE[grads.E_rows] += grads.E_vals
    q.E -= lr * vE
    for name in ("W1", "b1", "W2", "b2"):
        buf = v[name]
        buf *= mu
        buf += getattr(grads, name)
        getattr(q, name)[...] -= lr * buf


def train_step(state: TrainState, ids_q: Sequence[Sequence[int]], ids_k: Sequence[Sequence[int]],
               owners: Sequence[int], cfg: TrainConfig) -> StepReport:
    """One optimisation step on a batch of positive pairs; mutates ``state``."""
    if cfg.refill > len(ids_q):
        raise ConfigError(f"refill {cfg.refill} exceeds batch size {len(ids_q)}")
    Q, cache = encode_batch(state.q, ids_q, cfg.pooling, cfg.normalize)
    K, _ = encode_batch(state.k, ids_k, cfg.pooling, cfg.normalize)
    negs, neg_owner = state.queue.contents()
    mask = None
    if cfg.mask_same_base and negs.size:
        mask = np.asarray(owners)[:, None] == neg_owner[None, :]
    loss, dQ, acc = info_nce_batch(Q, K, negs, cfg.temperature, mask)
    grads = backward_batch(state.q, cache, dQ)
    lr = learning_rate(cfg, state.step)
    _sgd(state, grads, lr, cfg.sgd_momentum)
    ema_update(state.k, state.q, cfg.momentum, out=state.k)
    state.queue.enqueue(K[: cfg.refill], list(owners)[: cfg.refill], state.step)
    state.step += 1
    return StepReport(state.step, loss, acc, state.queue.fill, lr)


# -- data ------------------------------------------------------------------------------------


def load_training_sets(corpus_path) -> list[list[str]]:
    sets = []
    for rec in read_jsonl(corpus_path):
        sets.append([rec["source"]] + list(rec.get("variants", [])))
    if not sets:
        raise DataError(f"{corpus_path}: no training records")
    if not any(len(s) >= 2 for s in sets) and len(sets) < 2:
        raise DataError(f"{corpus_path}: no trainable pairs")
    return sets


def sample_batch(sets: list[list[str]], vocab: SubwordVocab, cfg: TrainConfig, step: int):
    """Positive pairs for ``step``; depends only on (seed, step) so resumed runs match."""
    rng = random.Random(derive_seed(cfg.seed, "batch", step))
    chosen = rng.sample(range(len(sets)), min(cfg.batch_size, len(sets)))
    while len(chosen) < cfg.batch_size:
        chosen.append(rng.randrange(len(sets)))
    ids_q, ids_k = [], []
    for b in chosen:
        members = sets[b]
        if len(members) >= 2:
            i, j = rng.sample(range(len(members)), 2)
        else:
            i = j = 0  # only the stochastic segmentation differs
        ids_q.append(vocab.encode(members[i], "sample", cfg.alpha, rng=rng))
        ids_k.append(vocab.encode(members[j], "sample", cfg.alpha, rng=rng))
    return ids_q, ids_k, chosen


# -- checkpoints -------------------------------------------------------------------------------


def save_state(state: TrainState, cfg: TrainConfig, path) -> None:
    arrays = {}
    for name in PARAM_NAMES:
        arrays["q." + name] = getattr(state.q, name)
        arrays["k." + name] = getattr(state.k, name)
        arrays["v." + name] = state.velocity[name]
    arrays["queue.keys"] = state.queue.keys
    arrays["queue.owner"] = state.queue.owner
    arrays["queue.born"] = state.queue.born
    meta = params_meta(state.q) | {
        "kind": "train_state", "schema_version": SCHEMA_VERSION, "step": state.step,
        "queue_ptr": state.queue.ptr, "queue_fill": state.queue.fill, "config": asdict(cfg),
    }
    save_arrays(path, meta, arrays)


def load_state(path) -> tuple[TrainState, TrainConfig]:
    meta, arrays = load_arrays(path)
    cfg = TrainConfig.from_dict(meta["config"])
    lineage = meta.get("lineage", {})
    q = EncoderParams(*(arrays["q." + n] for n in PARAM_NAMES), meta=dict(lineage))
    k = EncoderParams(*(arrays["k." + n] for n in PARAM_NAMES), meta=dict(lineage))
    queue = NegativeQueue(cfg.queue_size, cfg.d_out)
    queue.keys, queue.owner, queue.born = arrays["queue.keys"], arrays["queue.owner"], arrays["queue.born"]
    queue.ptr, queue.fill = meta["queue_ptr"], meta["queue_fill"]
    vel = {n: arrays["v." + n] for n in PARAM_NAMES}
    return TrainState(q, k, queue, vel, meta["step"]), cfg


def pretrain(corpus_path, vocab_path, cfg: TrainConfig, checkpoint_dir, resume: bool = True,
             log_every: int = 100) -> dict:
    """Run (or continue) pre-training and write checkpoints plus a metrics log.

    Files in ``checkpoint_dir``: ``metrics.jsonl`` (one report per step),
    ``latest.ckpt`` (full state, for resuming) and ``encoder.ckpt`` (query
    encoder only, written at the end).
    """
    cfg.validate()
    sets = load_training_sets(corpus_path)
    vocab = SubwordVocab.load(vocab_path)
    os.makedirs(checkpoint_dir, exist_ok=True)
    latest = os.path.join(checkpoint_dir, "latest.ckpt")
    metrics_path = os.path.join(checkpoint_dir, "metrics.jsonl")
    if resume and os.path.exists(latest):
        state, saved = load_state(latest)
        if {**asdict(saved), "steps": 0} != {**asdict(cfg), "steps": 0}:
            raise ConfigError("checkpoint was produced with a different configuration")
        kept = []
        if os.path.exists(metrics_path):
            with open(metrics_path, encoding="utf-8") as f:
                kept = [ln for ln in f if ln.strip() and json.loads(ln)["step"] <= state.step]
        with open(metrics_path, "w", encoding="utf-8") as f:
            f.writelines(kept)
    else:
        state = TrainState.fresh(vocab.size, cfg)
        open(metrics_path, "w").close()
    last: Optional[StepReport] = None
    with open(metrics_path, "a", encoding="utf-8") as mf:
        while state.step < cfg.steps:
            ids_q, ids_k, owners = sample_batch(sets, vocab, cfg, state.step)
            last = train_step(state, ids_q, ids_k, owners, cfg)
            mf.write(last.to_json() + "\n")
            if log_every and last.step % log_every == 0:
                log.info("step %d loss %.4f acc %.3f queue %d", last.step, last.loss, last.acc, last.queue_fill)
            if cfg.checkpoint_every and last.step % cfg.checkpoint_every == 0:
                mf.flush()
                save_state(state, cfg, latest)
    save_state(state, cfg, latest)
    save_params(state.q, os.path.join(checkpoint_dir, "encoder.ckpt"),
                {"kind": "encoder", "pooling": cfg.pooling, "normalize": cfg.normalize})
    return {"schema_version": SCHEMA_VERSION, "steps": state.step,
            "final": None if last is None else asdict(last),
            "checkpoint": os.path.join(checkpoint_dir, "encoder.ckpt")}
