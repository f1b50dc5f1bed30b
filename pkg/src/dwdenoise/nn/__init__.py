from .adam import adam_step
from .layers import (
    batchnorm_backward,
    batchnorm_forward,
    conv2d_backward,
    conv2d_forward,
    relu,
    relu_backward,
)
from .loss import mse_loss
from .network import (
    BatchNormParams,
    ConvLayerParams,
    Layer,
    ModelState,
    NetworkSpec,
    denoise,
    enumerate_params,
    init_params,
    network_backward,
    network_forward,
    trainable_params,
)

__all__ = [
    "BatchNormParams",
    "ConvLayerParams",
    "Layer",
    "ModelState",
    "NetworkSpec",
    "adam_step",
    "batchnorm_backward",
    "batchnorm_forward",
    "conv2d_backward",
    "conv2d_forward",
    "denoise",
    "enumerate_params",
    "init_params",
    "mse_loss",
    "network_backward",
    "network_forward",
    "relu",
    "relu_backward",
    "trainable_params",
]
