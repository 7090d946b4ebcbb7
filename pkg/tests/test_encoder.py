import numpy as np
import pytest

from codecontrast.encoder import (MAX, MEAN, backward_batch, encode_backward, encode_batch, encode_program,
                                  init_params, load_params, save_params)
from codecontrast.errors import EmptySequence
from codecontrast.tokenizer import PAD


def head(p, h):
    z = np.maximum(h @ p.W1 + p.b1, 0) @ p.W2 + p.b2
    return z / np.linalg.norm(z)


def fd_check(p, ids, pooling, G, h=1e-5):
    """Largest relative error between analytic and central-difference gradients."""
    _, cache = encode_batch(p, [ids], pooling)
    g = backward_batch(p, cache, G[None, :])
    analytic = {"E": g.dense_E(p.vocab_size), "W1": g.W1, "b1": g.b1, "W2": g.W2, "b2": g.b2}
    f = lambda: float(encode_program(p, ids, pooling) @ G)
    worst = 0.0
    for name, ana in analytic.items():
        A = getattr(p, name)
        num = np.zeros_like(A)
        for idx in np.ndindex(A.shape):
            old = A[idx]
            A[idx] = old + h
            up = f()
            A[idx] = old - h
            down = f()
            A[idx] = old
            num[idx] = (up - down) / (2 * h)
        worst = max(worst, np.linalg.norm(num - ana) / max(np.linalg.norm(num), np.linalg.norm(ana), 1e-12))
    return worst


def test_init_seeded():
    a, b, c = init_params(50, seed=0), init_params(50, seed=0), init_params(50, seed=1)
    assert all(np.array_equal(x, y) for x, y in zip(a.arrays().values(), b.arrays().values()))
    assert not np.array_equal(a.E, c.E)
    assert a.dims == (512, 512, 128)


def test_single_token_mean_is_that_embedding():
    p = init_params(30, 8, 6, 4, seed=2)
    assert np.allclose(encode_program(p, [7], MEAN), head(p, p.E[7]))


def test_mean_pooling_ignores_order_and_padding():
    p = init_params(30, 8, 6, 4, seed=2)
    a = encode_program(p, [4, 5, 6, 9], MEAN)
    assert np.allclose(a, encode_program(p, [9, 6, PAD, 5, 4], MEAN))


@pytest.mark.parametrize("pooling", [MEAN, MAX])
def test_unit_norm(pooling):
    p = init_params(30, 8, 6, 4, seed=2)
    assert abs(np.linalg.norm(encode_program(p, [4, 5, 6], pooling)) - 1) < 1e-6


def test_empty_sequence():
    with pytest.raises(EmptySequence):
        encode_program(init_params(10, 4, 4, 2), [PAD, PAD])


def test_zero_upstream_zero_gradients():
    p = init_params(30, 8, 6, 4, seed=2)
    g = encode_backward(p, [4, 5, 6], MEAN, np.zeros(4))
    assert not any(np.any(x) for x in (g.E_vals, g.W1, g.b1, g.W2, g.b2))


@pytest.mark.parametrize("pooling", [MEAN, MAX])
@pytest.mark.parametrize("seed", range(3))
def test_gradients_match_finite_differences(pooling, seed):
    rng = np.random.default_rng(seed)
    p = init_params(25, 6, 5, 4, seed=seed)
    ids = list(rng.integers(4, 25, size=10))
    assert fd_check(p, ids, pooling, rng.normal(size=4)) <= 1e-4


def test_gradient_rows_are_sparse():
    p = init_params(30, 8, 6, 4, seed=2)
    g = encode_backward(p, [4, 5, 5, 9], MEAN, np.ones(4))
    assert list(g.E_rows) == [4, 5, 9]
    dense = g.dense_E(30)
    assert not np.any(np.delete(dense, [4, 5, 9], axis=0))


def test_checkpoint_roundtrip_is_byte_stable(tmp_path):
    p = init_params(30, 8, 6, 4, seed=2)
    save_params(p, tmp_path / "a.ckpt")
    q = load_params(tmp_path / "a.ckpt")
    assert all(np.array_equal(x, y) for x, y in zip(p.arrays().values(), q.arrays().values()))
    save_params(q, tmp_path / "b.ckpt")
    assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()
