"""Bag-of-subwords program encoder: embedding lookup, pooling, two-layer MLP head.

Everything is float64 numpy with hand-written reverse mode. The training
code only relies on :func:`encode_batch`, :func:`backward_batch` and the
:class:`EncoderParams` container, so a sequence model could be swapped in
behind the same three names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .checkpoint import load_arrays, save_arrays
from .errors import DimensionMismatch, EmptySequence
from .tokenizer import PAD

FORMAT = "codecontrast-encoder"
FORMAT_VERSION = 1
PARAM_NAMES = ("E", "W1", "b1", "W2", "b2")
MEAN, MAX = "mean", "max"
_EPS = 1e-12


@dataclass
class EncoderParams:
    E: np.ndarray   # vocab x d_tok
    W1: np.ndarray  # d_tok x d_hid
    b1: np.ndarray
    W2: np.ndarray  # d_hid x d_out
    b2: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.E.shape[1], self.W1.shape[1], self.W2.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.E.shape[0]

    def arrays(self) -> dict:
        return {k: getattr(self, k) for k in PARAM_NAMES}

    def copy(self) -> "EncoderParams":
        return EncoderParams(*(getattr(self, k).copy() for k in PARAM_NAMES), meta=dict(self.meta))

    def check_like(self, other: "EncoderParams") -> None:
        for k in PARAM_NAMES:
            if getattr(self, k).shape != getattr(other, k).shape:
                raise DimensionMismatch(f"parameter {k}: {getattr(self, k).shape} vs {getattr(other, k).shape}")


def init_params(vocab_size: int, d_tok: int = 512, d_hid: int = 512, d_out: int = 128,
                seed: int = 0) -> EncoderParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init; an embedding row has fan-in 1."""
    if min(vocab_size, d_tok, d_hid, d_out) <= 0:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    u = lambda bound, shape: rng.uniform(-bound, bound, size=shape)
    b_tok, b_hid = 1.0 / np.sqrt(d_tok), 1.0 / np.sqrt(d_hid)
    return EncoderParams(
        E=u(1.0, (vocab_size, d_tok)),
        W1=u(b_tok, (d_tok, d_hid)),
        b1=u(b_tok, (d_hid,)),
        W2=u(b_hid, (d_hid, d_out)),
        b2=u(b_hid, (d_out,)),
        meta={"seed": seed},
    )


@dataclass
class _Cache:
    ids: list
    pooling: str
    normalize: bool
    argmax: list
    H: np.ndarray
    Z1: np.ndarray
    A1: np.ndarray
    Z2: np.ndarray
    norms: np.ndarray
    Y: np.ndarray


def _clean(ids) -> np.ndarray:
    a = np.asarray(ids, dtype=np.int64)
    a = a[a != PAD]
    if a.size == 0:
        raise EmptySequence("cannot encode an empty (or PAD-only) sequence")
    return a


def _pool(E: np.ndarray, ids: np.ndarray, pooling: str):
    X = E[ids]
    if pooling == MEAN:
        return X.mean(axis=0), None
    if pooling == MAX:
        arg = X.argmax(axis=0)
        return X[arg, np.arange(X.shape[1])], arg
    raise ValueError(f"unknown pooling {pooling!r}")


def encode_batch(params: EncoderParams, batch: Sequence[Sequence[int]], pooling: str = MEAN,
                 normalize: bool = True) -> tuple[np.ndarray, _Cache]:
    """Embeddings for a batch of id sequences, plus what the backward pass needs."""
    clean = [_clean(ids) for ids in batch]
    pooled = [_pool(params.E, ids, pooling) for ids in clean]
    H = np.stack([p for p, _ in pooled])
    Z1 = H @ params.W1 + params.b1
    A1 = np.maximum(Z1, 0.0)
    Z2 = A1 @ params.W2 + params.b2
    if normalize:
        norms = np.sqrt((Z2 * Z2).sum(axis=1))
        Y = Z2 / np.maximum(norms, _EPS)[:, None]
    else:
        norms = np.ones(len(clean))
        Y = Z2
    return Y, _Cache(clean, pooling, normalize, [a for _, a in pooled], H, Z1, A1, Z2, norms, Y)


@dataclass
class Gradients:
    E_rows: np.ndarray  # unique row indices touched
    E_vals: np.ndarray  # gradient for those rows
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    def dense_E(self, vocab_size: int) -> np.ndarray:
        out = np.zeros((vocab_size, self.E_vals.shape[1]))
        out[self.E_rows] = self.E_vals
        return out


def backward_batch(params: EncoderParams, cache: _Cache, G: np.ndarray) -> Gradients:
    """Gradients of ``sum(G * Y)`` with respect to every parameter block."""
    G = np.asarray(G, dtype=np.float64)
    if G.shape != cache.Y.shape:
        raise DimensionMismatch(f"upstream gradient {G.shape} vs output {cache.Y.shape}")
    if cache.normalize:
        Y = cache.Y
        dZ2 = (G - Y * (G * Y).sum(axis=1, keepdims=True)) / np.maximum(cache.norms, _EPS)[:, None]
    else:
        dZ2 = G
    dW2 = cache.A1.T @ dZ2
    db2 = dZ2.sum(axis=0)
    dZ1 = (dZ2 @ params.W2.T) * (cache.Z1 > 0)
    dW1 = cache.H.T @ dZ1
    db1 = dZ1.sum(axis=0)
    dH = dZ1 @ params.W1.T
    d_tok = params.E.shape[1]
    rows_all, vals_all = [], []
    for b, ids in enumerate(cache.ids):
        if cache.pooling == MEAN:
            rows, counts = np.unique(ids, return_counts=True)
            rows_all.append(rows)
            vals_all.append(counts[:, None] * (dH[b] / len(ids))[None, :])
        else:
            winners = ids[cache.argmax[b]]  # row chosen for each dimension
            rows, inv = np.unique(winners, return_inverse=True)
            vals = np.zeros((len(rows), d_tok))
            vals[inv, np.arange(d_tok)] = dH[b]
            rows_all.append(rows)
            vals_all.append(vals)
    rows = np.concatenate(rows_all)
    vals = np.concatenate(vals_all)
    uniq, inv = np.unique(rows, return_inverse=True)
    E_vals = np.zeros((len(uniq), d_tok))
    np.add.at(E_vals, inv, vals)
    return Gradients(uniq, E_vals, dW1, db1, dW2, db2)


def encode_program(params: EncoderParams, ids: Sequence[int], pooling: str = MEAN,
                   normalize: bool = True) -> np.ndarray:
    Y, _ = encode_batch(params, [ids], pooling, normalize)
    return Y[0]


def encode_backward(params: EncoderParams, ids: Sequence[int], pooling: str, upstream: np.ndarray,
                    normalize: bool = True) -> Gradients:
    _, cache = encode_batch(params, [ids], pooling, normalize)
    return backward_batch(params, cache, np.asarray(upstream, dtype=np.float64)[None, :])


def encode_many(params: EncoderParams, seqs: Sequence[Sequence[int]], pooling: str = MEAN,
                normalize: bool = True, chunk: int = 256) -> np.ndarray:
    out = [encode_batch(params, seqs[i:i + chunk], pooling, normalize)[0] for i in range(0, len(seqs), chunk)]
    return np.concatenate(out) if out else np.zeros((0, params.W2.shape[1]))


# -- persistence -----------------------------------------------------------------


def params_meta(params: EncoderParams) -> dict:
    d_tok, d_hid, d_out = params.dims
    return {"format": FORMAT, "version": FORMAT_VERSION, "vocab_size": params.vocab_size,
            "d_tok": d_tok, "d_hid": d_hid, "d_out": d_out, "lineage": params.meta}


def save_params(params: EncoderParams, path, extra_meta: dict | None = None) -> None:
    meta = params_meta(params) | (extra_meta or {})
    save_arrays(path, meta, params.arrays())


def load_params(path, prefix: str = "") -> EncoderParams:
    """Load encoder weights; ``prefix`` selects one encoder out of a training checkpoint."""
    meta, arrays = load_arrays(path)
    try:
        blocks = [arrays[prefix + k] for k in PARAM_NAMES]
    except KeyError:
        if prefix == "" and ("q." + PARAM_NAMES[0]) in arrays:
            blocks = [arrays["q." + k] for k in PARAM_NAMES]
        else:
            raise
    return EncoderParams(*blocks, meta=meta.get("lineage", {}))
