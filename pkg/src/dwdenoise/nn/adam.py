"""Bias-corrected ADAM with L2 weight decay added to the gradients."""

import numpy as np

from .network import ModelState, trainable_params


def adam_step(
    model: ModelState,
    grads: dict,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
    weight_decay: float = 0.0001,
) -> ModelState:
    """One update over all trainable parameters; mutates model in place.

    Weight decay enters as an L2 term added to each gradient before the
    moment updates. Raises on non-finite gradients, naming the layer.
    """
    if lr <= 0:
        raise ValueError("learning rate must be > 0")
    t = model.step_count + 1
    bc1 = 1.0 - beta1**t
    bc2 = 1.0 - beta2**t
    for name, param in trainable_params(model):
        g = grads[name]
        if g.shape != param.shape:
            raise ValueError(f"gradient shape mismatch for {name}")
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite gradient in {name}")
        if weight_decay != 0.0:
            g = g + weight_decay * param
        m = model.adam_m[name]
        v = model.adam_v[name]
        m *= beta1
        m += (1 - beta1) * g
        v *= beta2
        v += (1 - beta2) * (g * g)
        update = (lr / bc1) * m / (np.sqrt(v / bc2) + epsilon)
        param -= update.astype(param.dtype, copy=False)
    model.step_count = t
    return model
