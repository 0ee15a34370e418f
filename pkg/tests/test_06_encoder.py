import numpy as np
import pytest

from chaintag.embeddings import EmbeddingSequence
from chaintag.encoder import (
    DIRECTIONS,
    GATES,
    BiLstmEncoder,
    BiLstmParams,
    IdentityEncoder,
    bilstm_backward,
    bilstm_forward,
)
from chaintag.errors import CacheError, ShapeError
from chaintag.numerics import ParameterStore, init_parameters


def _params(rng, input_dim=3, hidden=4):
    store = ParameterStore()
    params = BiLstmParams.register(store, input_dim, hidden)
    init_parameters(store, rng)
    for p in store:
        p.value[...] = rng.uniform(-0.5, 0.5, size=p.shape)
    return store, params


def test_register_names_and_shapes():
    store = ParameterStore()
    params = BiLstmParams.register(store, 3, 4)
    assert len(store) == len(DIRECTIONS) * len(GATES) * 3
    assert store["encoder.fwd.W_i"].shape == (4, 3)
    assert store["encoder.bwd.U_o"].shape == (4, 4)
    assert store["encoder.fwd.b_f"].shape == (1, 4)
    assert params.output_dim == 8


def test_forget_bias_after_init(rng):
    store = ParameterStore()
    encoder = BiLstmEncoder(store, 3, 2)
    init_parameters(store, rng)
    encoder.after_init()
    assert np.all(store.value("encoder.fwd.b_f") == 1.0)
    assert np.all(store.value("encoder.bwd.b_f") == 1.0)
    assert np.all(store.value("encoder.fwd.b_i") == 0.0)


def test_output_shape_and_inference_has_no_cache(rng):
    _, params = _params(rng)
    h = EmbeddingSequence(rng.normal(size=(5, 3)))
    out = bilstm_forward(params, h)
    assert out.vectors.shape == (5, 8)
    assert out.cache is None
    with pytest.raises(CacheError):
        bilstm_backward(params, out, np.ones((5, 8)))


def test_input_dim_mismatch(rng):
    _, params = _params(rng)
    with pytest.raises(ShapeError):
        bilstm_forward(params, EmbeddingSequence(np.zeros((2, 4))))


def test_zero_parameters_give_zero_states(rng):
    store = ParameterStore()
    params = BiLstmParams.register(store, 3, 4)
    encoded = bilstm_forward(params, EmbeddingSequence(rng.normal(size=(5, 3))), training=True)
    assert np.all(encoded.vectors == 0.0)
    for direction in DIRECTIONS:
        cache = encoded.cache[direction]
        assert np.all(cache.tanh_c == 0.0)
        assert np.all(cache.h_prev == 0.0) and np.all(cache.c_prev == 0.0)


def _step(params, direction, x, h, c):
    def gate(name):
        return (
            params.get(direction, "W", name) @ x
            + params.get(direction, "U", name) @ h
            + params.get(direction, "b", name)[0]
        )

    i = 1.0 / (1.0 + np.exp(-gate("i")))
    f = 1.0 / (1.0 + np.exp(-gate("f")))
    o = 1.0 / (1.0 + np.exp(-gate("o")))
    c = f * c + i * np.tanh(gate("c"))
    return o * np.tanh(c), c


def test_forward_matches_stepwise_recomputation(rng):
    _, params = _params(rng, input_dim=3, hidden=4)
    x = rng.normal(size=(6, 3))
    out = bilstm_forward(params, EmbeddingSequence(x)).vectors

    expected = np.zeros((6, 8))
    h, c = np.zeros(4), np.zeros(4)
    for t in range(6):
        h, c = _step(params, "fwd", x[t], h, c)
        expected[t, :4] = h
    h, c = np.zeros(4), np.zeros(4)
    for t in range(5, -1, -1):
        h, c = _step(params, "bwd", x[t], h, c)
        expected[t, 4:] = h
    assert np.allclose(out, expected, atol=1e-14)


def test_backward_half_is_forward_half_of_reversed_input(rng):
    store, params = _params(rng)
    for gate in GATES:
        for kind in ("W", "U", "b"):
            params.get("bwd", kind, gate)[...] = params.get("fwd", kind, gate)
    x = rng.normal(size=(4, 3))
    out = bilstm_forward(params, EmbeddingSequence(x)).vectors
    rev = bilstm_forward(params, EmbeddingSequence(x[::-1].copy())).vectors
    assert np.allclose(out[:, 4:], rev[::-1, :4], atol=1e-14)


def test_backward_matches_finite_differences(rng):
    store, params = _params(rng, input_dim=3, hidden=3)
    x = rng.normal(size=(4, 3))
    upstream = rng.normal(size=(4, 6))

    def loss(inputs):
        return float(np.sum(upstream * bilstm_forward(params, EmbeddingSequence(inputs)).vectors))

    encoded = bilstm_forward(params, EmbeddingSequence(x), training=True)
    grads, dx = bilstm_backward(params, encoded, upstream)

    step = 1e-5
    for name in ("encoder.fwd.W_c", "encoder.bwd.U_f", "encoder.fwd.b_o", "encoder.bwd.b_i"):
        value = store.value(name)
        numeric = np.zeros_like(value)
        for idx in np.ndindex(value.shape):
            orig = value[idx]
            value[idx] = orig + step
            up = loss(x)
            value[idx] = orig - step
            down = loss(x)
            value[idx] = orig
            numeric[idx] = (up - down) / (2 * step)
        err = np.linalg.norm(grads[name] - numeric) / (np.linalg.norm(numeric) + 1e-8)
        assert err <= 1e-6, name

    numeric_dx = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        bumped = x.copy()
        bumped[idx] += step
        up = loss(bumped)
        bumped[idx] -= 2 * step
        numeric_dx[idx] = (up - loss(bumped)) / (2 * step)
    assert np.allclose(dx, numeric_dx, atol=1e-7)


def test_identity_encoder(rng):
    encoder = IdentityEncoder(3)
    h = EmbeddingSequence(rng.normal(size=(2, 3)))
    out = encoder.forward(h, training=True)
    assert out.vectors is h.vectors
    upstream = np.ones((2, 3))
    assert encoder.backward(out, upstream, {}) is upstream
    with pytest.raises(CacheError):
        encoder.backward(encoder.forward(h), upstream, {})
    with pytest.raises(ShapeError):
        encoder.forward(EmbeddingSequence(np.zeros((2, 4))))
