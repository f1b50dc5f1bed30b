"""The guided residual denoising network.

Layer stack: Conv+ReLU, then (Conv+BN+ReLU) x (depth-2), then Conv.
The first layer takes one channel (noisy image) or two (noisy plus
guidance); the last produces the single-channel residual estimate, and
the denoised image is noisy minus residual. First and last convolutions
carry biases; the middle ones rely on the batch-norm shift instead.
"""

from dataclasses import dataclass, field

import numpy as np

from ..seeds import derive_rng, MODEL_INIT
from .layers import (
    batchnorm_backward,
    batchnorm_forward,
    conv2d_backward,
    conv2d_forward,
    relu,
    relu_backward,
)


@dataclass
class NetworkSpec:
    depth: int
    width: int = 64
    in_channels: int = 1
    kernel: int = 3
    padding: int = 1

    def __post_init__(self):
        if self.depth < 3:
            raise ValueError("depth must be >= 3")
        if self.in_channels not in (1, 2):
            raise ValueError("in_channels must be 1 (plain) or 2 (guided)")
        if self.kernel != 3 or self.padding != 1:
            raise ValueError("only 3x3 kernels with padding 1 are supported")

    @property
    def guided(self) -> bool:
        return self.in_channels == 2


@dataclass
class ConvLayerParams:
    weights: np.ndarray  # (out_ch, in_ch, 3, 3)
    bias: np.ndarray | None = None


@dataclass
class BatchNormParams:
    gamma: np.ndarray
    beta: np.ndarray
    running_mean: np.ndarray
    running_var: np.ndarray
    epsilon: float = 1e-5
    momentum: float = 0.1


@dataclass
class Layer:
    conv: ConvLayerParams
    bn: BatchNormParams | None = None


@dataclass
class ModelState:
    spec: NetworkSpec
    layers: list[Layer]
    adam_m: dict[str, np.ndarray] = field(default_factory=dict)
    adam_v: dict[str, np.ndarray] = field(default_factory=dict)
    step_count: int = 0


# serialization / optimizer enumeration order for one layer
_PARAM_ORDER = ("weights", "bias", "gamma", "beta", "running_mean", "running_var")
_TRAINABLE = ("weights", "bias", "gamma", "beta")


def _layer_arrays(layer: Layer):
    arrays = {"weights": layer.conv.weights, "bias": layer.conv.bias}
    if layer.bn is not None:
        arrays.update(
            gamma=layer.bn.gamma,
            beta=layer.bn.beta,
            running_mean=layer.bn.running_mean,
            running_var=layer.bn.running_var,
        )
    return arrays


def enumerate_params(model: ModelState):
    """All arrays in the stable order: layer index ascending, then
    weights, bias, gamma, beta, running_mean, running_var."""
    out = []
    for i, layer in enumerate(model.layers):
        arrays = _layer_arrays(layer)
        for kind in _PARAM_ORDER:
            arr = arrays.get(kind)
            if arr is not None:
                out.append((f"layer{i:02d}.{kind}", arr))
    return out


def trainable_params(model: ModelState):
    return [(n, a) for n, a in enumerate_params(model) if n.split(".")[1] in _TRAINABLE]


def set_param(model: ModelState, name: str, value: np.ndarray):
    layer_part, kind = name.split(".")
    layer = model.layers[int(layer_part[5:])]
    if kind == "weights":
        layer.conv.weights = value
    elif kind == "bias":
        layer.conv.bias = value
    elif kind in ("gamma", "beta", "running_mean", "running_var"):
        setattr(layer.bn, kind, value)
    else:
        raise KeyError(name)


def init_params(spec: NetworkSpec, seed: int, dtype=np.float32) -> ModelState:
    """He fan-in Gaussian conv weights, unit batch-norm, zero moments.

    Deterministic: the same seed gives a bit-identical model.
    """
    rng = derive_rng(seed, MODEL_INIT)
    layers = []
    for i in range(spec.depth):
        in_ch = spec.in_channels if i == 0 else spec.width
        out_ch = 1 if i == spec.depth - 1 else spec.width
        fan_in = in_ch * spec.kernel * spec.kernel
        w = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(out_ch, in_ch, 3, 3))
        edge = i == 0 or i == spec.depth - 1
        conv = ConvLayerParams(
            weights=w.astype(dtype),
            bias=np.zeros(out_ch, dtype=dtype) if edge else None,
        )
        bn = None
        if not edge:
            bn = BatchNormParams(
                gamma=np.ones(out_ch, dtype=dtype),
                beta=np.zeros(out_ch, dtype=dtype),
                running_mean=np.zeros(out_ch, dtype=dtype),
                running_var=np.ones(out_ch, dtype=dtype),
            )
        layers.append(Layer(conv=conv, bn=bn))
    model = ModelState(spec=spec, layers=layers)
    for name, arr in trainable_params(model):
        model.adam_m[name] = np.zeros_like(arr)
        model.adam_v[name] = np.zeros_like(arr)
    return model


def copy_model(model: ModelState) -> ModelState:
    layers = []
    for layer in model.layers:
        conv = ConvLayerParams(
            weights=layer.conv.weights.copy(),
            bias=None if layer.conv.bias is None else layer.conv.bias.copy(),
        )
        bn = None
        if layer.bn is not None:
            bn = BatchNormParams(
                gamma=layer.bn.gamma.copy(),
                beta=layer.bn.beta.copy(),
                running_mean=layer.bn.running_mean.copy(),
                running_var=layer.bn.running_var.copy(),
                epsilon=layer.bn.epsilon,
                momentum=layer.bn.momentum,
            )
        layers.append(Layer(conv=conv, bn=bn))
    return ModelState(
        spec=model.spec,
        layers=layers,
        adam_m={k: v.copy() for k, v in model.adam_m.items()},
        adam_v={k: v.copy() for k, v in model.adam_v.items()},
        step_count=model.step_count,
    )


def _stack_input(noisy, guidance, spec):
    if noisy.ndim != 4 or noisy.shape[1] != 1:
        raise ValueError("noisy input must be (N,1,H,W)")
    if noisy.shape[2] < 3 or noisy.shape[3] < 3:
        raise ValueError("spatial size must be at least 3x3")
    if spec.guided:
        if guidance is None:
            raise ValueError("guided model requires a guidance image")
        if guidance.shape != noisy.shape:
            raise ValueError("guidance shape must match noisy shape")
        return np.concatenate([noisy, guidance], axis=1)
    if guidance is not None:
        raise ValueError("plain model does not take a guidance image")
    return noisy


def network_forward(noisy, guidance, model: ModelState, mode="eval", return_cache=False):
    """Run the stack and return the residual (noise estimate), (N,1,H,W).

    With return_cache=True also returns the per-layer caches consumed by
    network_backward (only meaningful in train mode).
    """
    x = _stack_input(noisy, guidance, model.spec)
    last = len(model.layers) - 1
    caches = []
    for i, layer in enumerate(model.layers):
        conv_in = x
        x = conv2d_forward(x, layer.conv)
        bn_cache = None
        relu_in = None
        if layer.bn is not None:
            x, bn_cache = batchnorm_forward(x, layer.bn, mode)
        if i != last:
            relu_in = x
            x = relu(x)
        if return_cache:
            caches.append((conv_in, bn_cache, relu_in))
    if return_cache:
        return x, caches
    return x


def network_backward(grad_residual, caches, model: ModelState):
    """Backpropagate through a cached train-mode forward pass.

    Returns gradients keyed like trainable_params; biases and BN
    parameters appear only where the layer has them.
    """
    grads = {}
    g = grad_residual
    last = len(model.layers) - 1
    for i in range(last, -1, -1):
        layer = model.layers[i]
        conv_in, bn_cache, relu_in = caches[i]
        if i != last:
            g = relu_backward(g, relu_in)
        if layer.bn is not None:
            g, dgamma, dbeta = batchnorm_backward(g, bn_cache)
            grads[f"layer{i:02d}.gamma"] = dgamma
            grads[f"layer{i:02d}.beta"] = dbeta
        g, dw, db = conv2d_backward(g, conv_in, layer.conv)
        grads[f"layer{i:02d}.weights"] = dw
        if db is not None:
            grads[f"layer{i:02d}.bias"] = db
    return grads


def denoise(noisy, guidance, model: ModelState):
    """Subtract the estimated residual from the noisy image (eval mode)."""
    return noisy - network_forward(noisy, guidance, model, mode="eval")
