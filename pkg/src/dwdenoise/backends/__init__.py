"""Convolution kernel backends.

The 3x3 convolution forward/backward kernels dominate training time, so
they exist twice: a compiled Cython extension (``_convkern``) and a
NumPy fallback (:mod:`.numpy_kernels`). The compiled one is picked at
import when available; ``DWDENOISE_BACKEND=numpy|cython`` or
:func:`select_backend` overrides the choice.

Both backends share one contract:

    conv3x3(xp, w) -> out          xp: (N,C,H+2,W+2) padded input
                                   w:  (F,C,3,3) -> out: (N,F,H,W)
    conv3x3_grad_w(xp, go) -> gw   go: (N,F,H,W)  -> gw: (F,C,3,3)

Accumulation order inside every output element is fixed (channel, then
kernel row, then kernel column, then batch/pixel ascending), and the
thread partition assigns each output element to exactly one thread, so
results are bit-reproducible for any fixed build regardless of thread
count.
"""

import os

import numpy as np

from . import numpy_kernels

try:
    from . import _convkern
except ImportError:
    _convkern = None

_num_threads = 1


class _CythonBackend:
    name = "cython"

    @staticmethod
    def conv3x3(xp, w):
        n, c, hp, wp = xp.shape
        f = w.shape[0]
        # kernel works filter-innermost: weights as (C, 9, F), output NHWF
        wt = np.ascontiguousarray(w.transpose(1, 2, 3, 0)).reshape(c, 9, f)
        out = np.zeros((n, hp - 2, wp - 2, f), dtype=xp.dtype)
        _convkern.conv3x3_nhwf(xp, wt, out, _num_threads)
        return np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    @staticmethod
    def conv3x3_grad_w(xp, go):
        gw = np.zeros((go.shape[1], xp.shape[1], 3, 3), dtype=xp.dtype)
        gt = np.ascontiguousarray(go.transpose(0, 2, 3, 1))
        _convkern.conv3x3_grad_w(xp, gt, gw, _num_threads)
        return gw


_BACKENDS = {"numpy": numpy_kernels}
if _convkern is not None:
    _BACKENDS["cython"] = _CythonBackend


def available_backends():
    return sorted(_BACKENDS)


def _default_name():
    env = os.environ.get("DWDENOISE_BACKEND", "auto").lower()
    if env in _BACKENDS:
        return env
    if env not in ("", "auto"):
        raise ValueError(
            f"DWDENOISE_BACKEND={env!r} not available; have {available_backends()}"
        )
    return "cython" if "cython" in _BACKENDS else "numpy"


_active = _BACKENDS[_default_name()]


def select_backend(name: str):
    """Switch the active kernel backend; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    previous = _active.name if hasattr(_active, "name") else _active.__name__
    _active = _BACKENDS[name]
    return previous


def active_backend_name() -> str:
    return getattr(_active, "name", "numpy")


def get_backend():
    return _active


def set_num_threads(n: int):
    global _num_threads
    if n < 1:
        raise ValueError("thread count must be >= 1")
    _num_threads = int(n)


def get_num_threads() -> int:
    return _num_threads
