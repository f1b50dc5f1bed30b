"""Layer primitives: 3x3 same-size convolution, batch norm, ReLU.

All arrays are NCHW. Kernels are fixed at 3x3 with zero padding 1 and
stride 1, so spatial size is always preserved. Backward passes are
handwritten; each takes the tensors cached by its forward call.
"""

import numpy as np

from .. import backends


def _pad1(x):
    return np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))


def conv2d_forward(x, params):
    """Convolve x (N,Cin,H,W) with params.weights (Cout,Cin,3,3).

    Returns (N,Cout,H,W); adds params.bias per output channel when set.
    """
    w = params.weights
    if x.ndim != 4:
        raise ValueError(f"expected NCHW input, got ndim={x.ndim}")
    if x.shape[1] != w.shape[1]:
        raise ValueError(
            f"input has {x.shape[1]} channels but weights expect {w.shape[1]}"
        )
    out = backends.get_backend().conv3x3(_pad1(x), w)
    if params.bias is not None:
        out += params.bias[None, :, None, None]
    return out


def conv2d_backward(grad_out, cached_input, params):
    """Gradients of conv2d_forward.

    cached_input is the forward input (unpadded). Returns
    (grad_input, grad_weights, grad_bias); grad_bias is None when the
    layer has no bias.
    """
    if cached_input is None:
        raise ValueError("conv2d_backward needs the cached forward input")
    w = params.weights
    if grad_out.shape[1] != w.shape[0] or cached_input.shape[1] != w.shape[1]:
        raise ValueError("grad_out/cached_input channels do not match weights")
    kern = backends.get_backend()
    grad_weights = kern.conv3x3_grad_w(_pad1(cached_input), grad_out)
    # input gradient is the same stencil applied to grad_out with the
    # kernel flipped spatially and transposed in the channel axes
    w_flip = np.ascontiguousarray(w[:, :, ::-1, ::-1].transpose(1, 0, 2, 3))
    grad_input = kern.conv3x3(_pad1(grad_out), w_flip)
    grad_bias = None
    if params.bias is not None:
        grad_bias = grad_out.sum(axis=(0, 2, 3))
    return grad_input, grad_weights, grad_bias


def batchnorm_forward(x, params, mode):
    """Per-channel batch normalization.

    mode "train" normalizes with batch statistics and updates the
    running mean/var in place by the momentum rule; mode "eval"
    normalizes with the stored running statistics. Returns
    (output, cache); cache is None in eval mode.
    """
    if mode not in ("train", "eval"):
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
    if params.epsilon <= 0:
        raise ValueError("batch norm epsilon must be > 0")
    gamma = params.gamma[None, :, None, None]
    beta = params.beta[None, :, None, None]
    if mode == "eval":
        inv_std = 1.0 / np.sqrt(params.running_var + params.epsilon)
        xhat = (x - params.running_mean[None, :, None, None]) * inv_std[None, :, None, None]
        return gamma * xhat + beta, None

    n, c, h, w = x.shape
    m = n * h * w
    if m < 2:
        raise ValueError("train-mode batch norm needs at least 2 values per channel")
    mean = x.mean(axis=(0, 2, 3))
    var = x.var(axis=(0, 2, 3))
    inv_std = 1.0 / np.sqrt(var + params.epsilon)
    xhat = (x - mean[None, :, None, None]) * inv_std[None, :, None, None]
    out = gamma * xhat + beta

    mom = params.momentum
    params.running_mean[:] = (1 - mom) * params.running_mean + mom * mean
    # running variance uses the unbiased estimate, normalization the biased one
    params.running_var[:] = (1 - mom) * params.running_var + mom * var * (m / (m - 1))

    cache = (xhat, inv_std, params.gamma)
    return out, cache


def batchnorm_backward(grad_out, cache):
    """Gradients of train-mode batchnorm_forward.

    Returns (grad_input, grad_gamma, grad_beta).
    """
    if cache is None:
        raise ValueError("batchnorm_backward needs a train-mode cache")
    xhat, inv_std, gamma = cache
    n, c, h, w = grad_out.shape
    m = n * h * w
    grad_beta = grad_out.sum(axis=(0, 2, 3))
    grad_gamma = (grad_out * xhat).sum(axis=(0, 2, 3))
    dxhat = grad_out * gamma[None, :, None, None]
    # combined mean/variance chain terms
    grad_input = (
        dxhat
        - dxhat.mean(axis=(0, 2, 3), keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=(0, 2, 3), keepdims=True)
    ) * inv_std[None, :, None, None]
    return grad_input, grad_gamma, grad_beta


def relu(x):
    return np.maximum(x, 0)


def relu_backward(grad_out, cached_input):
    # subgradient at exactly 0 is taken as 0
    return grad_out * (cached_input > 0)
