"""NumPy fallback kernels: 3x3 convolution as nine shifted GEMMs.

Each (ky, kx) tap contributes one tensordot over the channel axis, which
BLAS handles; no im2col buffer is materialized.
"""

import numpy as np

name = "numpy"


def conv3x3(xp, w):
    """Valid 3x3 correlation of a pre-padded input.

    xp: (N, C, H+2, W+2), w: (F, C, 3, 3) -> (N, F, H, W).
    """
    n, c, hp, wp = xp.shape
    h, wd = hp - 2, wp - 2
    f = w.shape[0]
    acc = np.zeros((n, h, wd, f), dtype=xp.dtype)
    for ky in range(3):
        for kx in range(3):
            acc += np.tensordot(
                xp[:, :, ky : ky + h, kx : kx + wd], w[:, :, ky, kx], axes=([1], [1])
            )
    return np.ascontiguousarray(np.moveaxis(acc, 3, 1))


def conv3x3_grad_w(xp, go):
    """Weight gradient of conv3x3.

    xp: (N, C, H+2, W+2), go: (N, F, H, W) -> (F, C, 3, 3).
    """
    n, c, hp, wp = xp.shape
    h, wd = hp - 2, wp - 2
    gw = np.empty((go.shape[1], c, 3, 3), dtype=xp.dtype)
    for ky in range(3):
        for kx in range(3):
            gw[:, :, ky, kx] = np.tensordot(
                go, xp[:, :, ky : ky + h, kx : kx + wd], axes=([0, 2, 3], [0, 2, 3])
            )
    return gw
