# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled 3x3 convolution kernels (forward and weight gradient).

Both kernels are nine-tap outer products with the filter axis innermost
and contiguous, which is what lets the inner loops vectorize: the
wrapper supplies weights as (C, 9, F) and produces/consumes activation
gradients in NHWF layout. The row helpers live in convrows.c so their
``restrict`` qualifiers survive inlining decisions. Threads own
disjoint output slices and every element accumulates in a fixed
(channel, tap, batch, row, column) order, so results are identical for
every thread count.
"""

from cython.parallel cimport prange
from libc.stdlib cimport free, malloc
from libc.string cimport memset


cdef extern from "convrows.h":
    void conv9_row_float(float* o, const float* r0, const float* r1,
                         const float* r2, const float* q, long W, long F) nogil
    void conv9_row_double(double* o, const double* r0, const double* r1,
                          const double* r2, const double* q, long W, long F) nogil
    void tap_fma9_row_float(float* acc, const float* grow, const float* r0,
                            const float* r1, const float* r2, long W, long F) nogil
    void tap_fma9_row_double(double* acc, const double* grow, const double* r0,
                             const double* r1, const double* r2, long W, long F) nogil


ctypedef fused real:
    float
    double


def conv3x3_nhwf(real[:, :, :, ::1] xp, real[:, :, ::1] wt,
                 real[:, :, :, ::1] out, int num_threads):
    """out[n,y,x,f] += sum_c taps(xp[n,c],y,x) . wt[c,:,f].

    xp: padded input (N, C, H+2, W+2); wt: weights as (C, 9, F);
    out: NHWF, zero-initialized by the caller.
    """
    cdef Py_ssize_t N = out.shape[0], H = out.shape[1]
    cdef Py_ssize_t W = out.shape[2], F = out.shape[3]
    cdef Py_ssize_t C = xp.shape[1]
    cdef Py_ssize_t n, c, y

    with nogil:
        for n in prange(N, schedule='static', num_threads=num_threads):
            for c in range(C):
                for y in range(H):
                    if real is float:
                        conv9_row_float(&out[n, y, 0, 0], &xp[n, c, y, 0],
                                        &xp[n, c, y + 1, 0], &xp[n, c, y + 2, 0],
                                        &wt[c, 0, 0], W, F)
                    else:
                        conv9_row_double(&out[n, y, 0, 0], &xp[n, c, y, 0],
                                         &xp[n, c, y + 1, 0], &xp[n, c, y + 2, 0],
                                         &wt[c, 0, 0], W, F)


def conv3x3_grad_w(real[:, :, :, ::1] xp, real[:, :, :, ::1] gt,
                   real[:, :, :, ::1] gw, int num_threads):
    """gw[f,c,ky,kx] = sum over (n,y,x) of gt[n,y,x,f] * xp[n,c,y+ky,x+kx].

    gt is the output gradient in NHWF layout.
    """
    cdef Py_ssize_t N = gt.shape[0], H = gt.shape[1]
    cdef Py_ssize_t W = gt.shape[2], F = gt.shape[3]
    cdef Py_ssize_t C = xp.shape[1]
    cdef Py_ssize_t c, n, y, f, k
    cdef real* acc

    with nogil:
        for c in prange(C, schedule='static', num_threads=num_threads):
            # nine F-wide accumulators per input channel
            acc = <real*> malloc(9 * F * sizeof(real))
            if acc == NULL:
                with gil:
                    raise MemoryError()
            memset(acc, 0, 9 * F * sizeof(real))
            for n in range(N):
                for y in range(H):
                    if real is float:
                        tap_fma9_row_float(acc, &gt[n, y, 0, 0], &xp[n, c, y, 0],
                                           &xp[n, c, y + 1, 0], &xp[n, c, y + 2, 0],
                                           W, F)
                    else:
                        tap_fma9_row_double(acc, &gt[n, y, 0, 0], &xp[n, c, y, 0],
                                            &xp[n, c, y + 1, 0], &xp[n, c, y + 2, 0],
                                            W, F)
            for k in range(9):
                for f in range(F):
                    gw[f, c, k // 3, k % 3] = acc[k * F + f]
            free(acc)
