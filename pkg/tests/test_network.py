import numpy as np
import pytest
from numpy.testing import assert_allclose

from dwdenoise.nn import (
    NetworkSpec,
    batchnorm_forward,
    denoise,
    enumerate_params,
    init_params,
    network_forward,
)

from oracles import conv2d_naive, max_rel_error


def guided_spec(depth=3, width=4):
    return NetworkSpec(depth=depth, width=width, in_channels=2)


def test_spec_validation():
    with pytest.raises(ValueError):
        NetworkSpec(depth=2)
    with pytest.raises(ValueError):
        NetworkSpec(depth=3, in_channels=3)
    with pytest.raises(ValueError):
        NetworkSpec(depth=3, kernel=5)


def test_layer_shapes_and_bias_placement():
    model = init_params(NetworkSpec(depth=5, width=8, in_channels=2), seed=0)
    assert model.layers[0].conv.weights.shape == (8, 2, 3, 3)
    assert model.layers[0].conv.bias is not None
    assert model.layers[0].bn is None
    for layer in model.layers[1:-1]:
        assert layer.conv.weights.shape == (8, 8, 3, 3)
        assert layer.conv.bias is None
        assert layer.bn is not None
    assert model.layers[-1].conv.weights.shape == (1, 8, 3, 3)
    assert model.layers[-1].conv.bias is not None
    assert model.layers[-1].bn is None


def test_init_deterministic_and_seed_sensitive():
    a = init_params(guided_spec(), seed=7)
    b = init_params(guided_spec(), seed=7)
    c = init_params(guided_spec(), seed=8)
    for (na, pa), (_, pb) in zip(enumerate_params(a), enumerate_params(b)):
        assert np.array_equal(pa, pb), na
    assert not np.array_equal(
        a.layers[0].conv.weights, c.layers[0].conv.weights
    )


def test_he_init_scale():
    # empirical std of first-layer weights vs sqrt(2 / (9 * in_ch))
    spec = NetworkSpec(depth=3, width=800, in_channels=2)
    model = init_params(spec, seed=3)
    w = model.layers[0].conv.weights  # 800*2*9 = 14400 draws
    expected = np.sqrt(2.0 / (9 * 2))
    assert abs(w.std() / expected - 1.0) < 0.1


def test_zero_weights_give_zero_residual(backend, rng):
    model = init_params(guided_spec(), seed=0, dtype=np.float64)
    for layer in model.layers:
        layer.conv.weights[:] = 0.0
    noisy = rng.standard_normal((2, 1, 8, 8))
    guidance = rng.standard_normal((2, 1, 8, 8))
    res = network_forward(noisy, guidance, model)
    assert_allclose(res, 0.0)


def test_zero_final_layer_is_fixed_point(backend, rng):
    model = init_params(guided_spec(depth=4), seed=5, dtype=np.float64)
    model.layers[-1].conv.weights[:] = 0.0
    model.layers[-1].conv.bias[:] = 0.0
    noisy = rng.standard_normal((1, 1, 6, 6))
    guidance = rng.standard_normal((1, 1, 6, 6))
    assert_allclose(network_forward(noisy, guidance, model), 0.0)
    assert_allclose(denoise(noisy, guidance, model), noisy)


@pytest.mark.parametrize("h,w", [(3, 3), (5, 9), (17, 12), (64, 256)])
def test_shape_preserved(backend, rng, h, w):
    model = init_params(guided_spec(depth=4, width=3), seed=1, dtype=np.float64)
    noisy = rng.standard_normal((1, 1, h, w))
    guidance = rng.standard_normal((1, 1, h, w))
    assert network_forward(noisy, guidance, model).shape == (1, 1, h, w)


@pytest.mark.parametrize("depth", range(3, 21))
def test_shape_preserved_all_depths(depth, rng):
    model = init_params(
        NetworkSpec(depth=depth, width=2, in_channels=1), seed=depth, dtype=np.float64
    )
    x = rng.standard_normal((1, 1, 7, 11))
    assert network_forward(x, None, model).shape == x.shape


def test_guidance_presence_enforced(rng):
    guided = init_params(guided_spec(), seed=0)
    plain = init_params(NetworkSpec(depth=3, width=4, in_channels=1), seed=0)
    x = rng.standard_normal((1, 1, 5, 5)).astype(np.float32)
    with pytest.raises(ValueError, match="guidance"):
        network_forward(x, None, guided)
    with pytest.raises(ValueError, match="guidance"):
        network_forward(x, x, plain)


def test_residual_identity(backend, rng):
    model = init_params(guided_spec(depth=4, width=6), seed=2, dtype=np.float64)
    noisy = rng.standard_normal((2, 1, 10, 10))
    guidance = rng.standard_normal((2, 1, 10, 10))
    res = network_forward(noisy, guidance, model)
    assert np.array_equal(denoise(noisy, guidance, model), noisy - res)


def test_eval_mode_deterministic(backend, rng):
    model = init_params(guided_spec(depth=5, width=8), seed=9)
    noisy = rng.standard_normal((1, 1, 12, 12)).astype(np.float32)
    guidance = rng.standard_normal((1, 1, 12, 12)).astype(np.float32)
    a = network_forward(noisy, guidance, model, mode="eval")
    b = network_forward(noisy, guidance, model, mode="eval")
    assert np.array_equal(a, b)


def test_depth3_matches_hand_composed_layers(backend, rng):
    """Compose the three layers with independent naive ops."""
    model = init_params(guided_spec(depth=3, width=4), seed=11, dtype=np.float64)
    noisy = rng.standard_normal((1, 1, 7, 7))
    guidance = rng.standard_normal((1, 1, 7, 7))

    x = np.concatenate([noisy, guidance], axis=1)
    l0, l1, l2 = model.layers
    h0 = np.maximum(conv2d_naive(x, l0.conv.weights, l0.conv.bias), 0.0)
    h1 = conv2d_naive(h0, l1.conv.weights)
    mean = h1.mean(axis=(0, 2, 3), keepdims=True)
    var = h1.var(axis=(0, 2, 3), keepdims=True)
    h1 = (h1 - mean) / np.sqrt(var + l1.bn.epsilon)
    h1 = np.maximum(
        l1.bn.gamma[None, :, None, None] * h1 + l1.bn.beta[None, :, None, None], 0.0
    )
    expected = conv2d_naive(h1, l2.conv.weights, l2.conv.bias)

    got = network_forward(noisy, guidance, model, mode="train")
    assert max_rel_error(got, expected) < 1e-6


def test_contrived_residual_equals_noisy_gives_zero(backend):
    """Identity-passing weights make the residual track the (non-negative)
    noisy channel, so the denoised image collapses to ~0."""
    model = init_params(guided_spec(depth=3, width=2), seed=0, dtype=np.float64)
    for layer in model.layers:
        layer.conv.weights[:] = 0.0
        if layer.conv.bias is not None:
            layer.conv.bias[:] = 0.0
    model.layers[0].conv.weights[0, 0, 1, 1] = 1.0  # copy noisy into channel 0
    model.layers[1].conv.weights[0, 0, 1, 1] = 1.0
    model.layers[2].conv.weights[0, 0, 1, 1] = 1.0
    rng = np.random.default_rng(0)
    noisy = rng.uniform(0.1, 1.0, (1, 1, 6, 6))
    guidance = rng.uniform(0.0, 1.0, (1, 1, 6, 6))
    out = denoise(noisy, guidance, model)  # eval-mode BN is near-identity
    assert_allclose(out, 0.0, atol=1e-5)
