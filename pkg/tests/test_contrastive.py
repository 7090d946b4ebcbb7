import json
import math

import numpy as np
import pytest

from codecontrast.augment import augment_corpus, default_specs
from codecontrast.contrastive import (NegativeQueue, TrainConfig, TrainState, ema_update, info_nce, info_nce_batch,
                                      load_state, pretrain, train_step)
from codecontrast.encoder import init_params, load_params
from codecontrast.errors import ConfigError
from codecontrast.eval.synthetic import write_corpus

TINY = dict(d_tok=16, d_hid=16, d_out=8, batch_size=8, queue_size=16, refill=4, warmup_steps=2, lr=0.05)


def test_info_nce_reference_value():
    q = np.array([1.0, 0.0, 0.0])
    loss, _, _ = info_nce(q, q, np.array([[0, 1.0, 0], [0, 0, 1.0]]), 1.0)
    assert loss == pytest.approx(-math.log(math.e / (math.e + 2)), abs=1e-12)
    assert loss == pytest.approx(0.5514, abs=1e-4)


def test_info_nce_without_negatives_is_zero():
    rng = np.random.default_rng(0)
    assert info_nce(rng.normal(size=4), rng.normal(size=4), [], 0.07)[0] == 0.0


def test_info_nce_high_temperature_limit():
    rng = np.random.default_rng(1)
    q, k, negs = rng.normal(size=4), rng.normal(size=4), rng.normal(size=(2, 4))
    assert info_nce(q, k, negs, 1e6)[0] == pytest.approx(math.log(3), abs=1e-3)


def test_info_nce_matches_cross_entropy_and_gradients():
    rng = np.random.default_rng(2)
    for _ in range(5):
        q, k, negs = rng.normal(size=6), rng.normal(size=6), rng.normal(size=(4, 6))
        t = 0.3
        logits = np.concatenate([[q @ k], negs @ q]) / t
        ce = -logits[0] + math.log(np.exp(logits).sum())
        loss, dq, dk = info_nce(q, k, negs, t)
        assert abs(loss - ce) < 1e-10
        for vec, grad, which in ((q, dq, 0), (k, dk, 1)):
            num = np.zeros(6)
            for i in range(6):
                v1, v2 = vec.copy(), vec.copy()
                v1[i] += 1e-6
                v2[i] -= 1e-6
                a = info_nce(v1, k, negs, t)[0] if which == 0 else info_nce(q, v1, negs, t)[0]
                b = info_nce(v2, k, negs, t)[0] if which == 0 else info_nce(q, v2, negs, t)[0]
                num[i] = (a - b) / 2e-6
            assert np.linalg.norm(num - grad) / np.linalg.norm(num) < 1e-4


def test_batch_loss_masks_same_base_negatives():
    rng = np.random.default_rng(3)
    Q, K, negs = rng.normal(size=(2, 4)), rng.normal(size=(2, 4)), rng.normal(size=(3, 4))
    mask = np.array([[True, False, False], [False, False, False]])
    loss, dQ, _ = info_nce_batch(Q, K, negs, 0.5, mask)
    expected = (info_nce(Q[0], K[0], negs[1:], 0.5)[0] + info_nce(Q[1], K[1], negs, 0.5)[0]) / 2
    assert loss == pytest.approx(expected, abs=1e-12)
    assert np.allclose(dQ[0], info_nce(Q[0], K[0], negs[1:], 0.5)[1] / 2)


def test_ema_formula_and_limits():
    q, k = init_params(5, 2, 2, 2, seed=0), init_params(5, 2, 2, 2, seed=1)
    k.E[0, 0], q.E[0, 0] = 0.0, 1.0
    assert ema_update(k, q, 0.999).E[0, 0] == pytest.approx(0.001)
    assert np.array_equal(ema_update(k, q, 0.0).W1, q.W1)


def test_ema_converges_geometrically():
    q, k = init_params(5, 2, 2, 2, seed=0), init_params(5, 2, 2, 2, seed=1)
    gap0 = np.abs(k.W1 - q.W1)
    for _ in range(100):
        ema_update(k, q, 0.9, out=k)
    assert np.allclose(np.abs(k.W1 - q.W1), gap0 * 0.9 ** 100, rtol=1e-8, atol=1e-15)


def test_queue_is_fifo_with_owners():
    queue = NegativeQueue(3, 2)
    queue.enqueue(np.eye(2), [0, 1], step=0)
    queue.enqueue(np.ones((2, 2)), [2, 3], step=1)
    keys, owners = queue.contents()
    assert list(owners) == [3, 1, 2] and queue.oldest_step() == 0
    assert np.array_equal(keys[0], [1, 1])


def test_first_step_accuracy_convention():
    cfg = TrainConfig(**TINY).validate()
    state = TrainState.fresh(20, cfg)
    rng = np.random.default_rng(0)
    ids = [list(rng.integers(4, 20, 5)) for _ in range(8)]
    report = train_step(state, ids, ids, list(range(8)), cfg)
    assert report.acc == 1.0 and report.queue_fill == 4


def test_config_validation():
    with pytest.raises(ConfigError):
        TrainConfig(refill=40, batch_size=32).validate()
    with pytest.raises(ConfigError):
        TrainConfig.from_dict({"nope": 1})


def test_two_programs_become_separable():
    cfg = TrainConfig(**{**TINY, "batch_size": 2, "refill": 2, "queue_size": 4, "lr": 0.2}).validate()
    state = TrainState.fresh(12, cfg)
    a, b = [4, 5, 6, 7], [8, 9, 10, 11]
    for _ in range(500):
        train_step(state, [a, b], [a, b], [0, 1], cfg)
    from codecontrast.encoder import encode_program
    qa, qb = encode_program(state.q, a, cfg.pooling), encode_program(state.q, b, cfg.pooling)
    ka = encode_program(state.k, a, cfg.pooling)
    assert qa @ ka - qb @ ka > 0.1


@pytest.fixture(scope="module")
def train_files(tmp_path_factory, small_corpus, small_vocab):
    d = tmp_path_factory.mktemp("train")
    write_corpus(small_corpus, d / "c.jsonl")
    augment_corpus(d / "c.jsonl", d / "aug.jsonl", default_specs(), 4, 0)
    small_vocab.save(d / "v.txt")
    return d


def test_zero_steps_returns_initialisation(train_files, small_vocab):
    cfg = TrainConfig(**TINY, steps=0)
    pretrain(train_files / "aug.jsonl", train_files / "v.txt", cfg, train_files / "zero", resume=False)
    got = load_params(train_files / "zero" / "encoder.ckpt")
    want = init_params(small_vocab.size, 16, 16, 8, seed=0)
    assert all(np.array_equal(x, y) for x, y in zip(got.arrays().values(), want.arrays().values()))


def test_resume_matches_uninterrupted_run(train_files):
    full = TrainConfig(**TINY, steps=6, checkpoint_every=3)
    pretrain(train_files / "aug.jsonl", train_files / "v.txt", full, train_files / "full", resume=False)
    half = TrainConfig(**TINY, steps=3, checkpoint_every=3)
    pretrain(train_files / "aug.jsonl", train_files / "v.txt", half, train_files / "split", resume=False)
    pretrain(train_files / "aug.jsonl", train_files / "v.txt", full, train_files / "split", resume=True)
    read = lambda p: (p / "metrics.jsonl").read_text()
    assert read(train_files / "full") == read(train_files / "split")
    assert (train_files / "full" / "encoder.ckpt").read_bytes() == (train_files / "split" / "encoder.ckpt").read_bytes()
    state, cfg = load_state(train_files / "full" / "latest.ckpt")
    assert state.step == 6 and cfg == full
    assert len([json.loads(x) for x in read(train_files / "full").splitlines()]) == 6


def test_resume_rejects_changed_config(train_files):
    cfg = TrainConfig(**TINY, steps=2)
    pretrain(train_files / "aug.jsonl", train_files / "v.txt", cfg, train_files / "cfg", resume=False)
    with pytest.raises(ConfigError):
        pretrain(train_files / "aug.jsonl", train_files / "v.txt", TrainConfig(**{**TINY, "lr": 0.2}, steps=4),
                 train_files / "cfg", resume=True)
