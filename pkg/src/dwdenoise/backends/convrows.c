#include "convrows.h"

/* out row (W x F) += taps(x) . q, with q the (9, F) filter block */
#define CONV9_ROW(T)                                                        \
void conv9_row_##T(T *restrict o, const T *restrict r0,                     \
                   const T *restrict r1, const T *restrict r2,              \
                   const T *restrict q, long w, long f) {                   \
    const T *restrict q0 = q;         const T *restrict q1 = q + f;         \
    const T *restrict q2 = q + 2 * f; const T *restrict q3 = q + 3 * f;     \
    const T *restrict q4 = q + 4 * f; const T *restrict q5 = q + 5 * f;     \
    const T *restrict q6 = q + 6 * f; const T *restrict q7 = q + 7 * f;     \
    const T *restrict q8 = q + 8 * f;                                       \
    for (long x = 0; x < w; x++) {                                          \
        const T t0 = r0[x], t1 = r0[x + 1], t2 = r0[x + 2];                 \
        const T t3 = r1[x], t4 = r1[x + 1], t5 = r1[x + 2];                 \
        const T t6 = r2[x], t7 = r2[x + 1], t8 = r2[x + 2];                 \
        T *restrict ox = o + x * f;                                         \
        _Pragma("omp simd")                                                 \
        for (long i = 0; i < f; i++)                                        \
            ox[i] += t0 * q0[i] + t1 * q1[i] + t2 * q2[i]                   \
                   + t3 * q3[i] + t4 * q4[i] + t5 * q5[i]                   \
                   + t6 * q6[i] + t7 * q7[i] + t8 * q8[i];                  \
    }                                                                       \
}

CONV9_ROW(float)
CONV9_ROW(double)

/* acc (9 x F) += taps(x) (outer) grad row (W x F) */
#define TAP_FMA9_ROW(T)                                                     \
void tap_fma9_row_##T(T *restrict acc, const T *restrict grow,              \
                      const T *restrict r0, const T *restrict r1,           \
                      const T *restrict r2, long w, long f) {               \
    T *restrict a0 = acc;         T *restrict a1 = acc + f;                 \
    T *restrict a2 = acc + 2 * f; T *restrict a3 = acc + 3 * f;             \
    T *restrict a4 = acc + 4 * f; T *restrict a5 = acc + 5 * f;             \
    T *restrict a6 = acc + 6 * f; T *restrict a7 = acc + 7 * f;             \
    T *restrict a8 = acc + 8 * f;                                           \
    for (long x = 0; x < w; x++) {                                          \
        const T *restrict g = grow + x * f;                                 \
        const T t0 = r0[x], t1 = r0[x + 1], t2 = r0[x + 2];                 \
        const T t3 = r1[x], t4 = r1[x + 1], t5 = r1[x + 2];                 \
        const T t6 = r2[x], t7 = r2[x + 1], t8 = r2[x + 2];                 \
        _Pragma("omp simd")                                                 \
        for (long i = 0; i < f; i++) {                                      \
            const T gi = g[i];                                              \
            a0[i] += t0 * gi; a1[i] += t1 * gi; a2[i] += t2 * gi;           \
            a3[i] += t3 * gi; a4[i] += t4 * gi; a5[i] += t5 * gi;           \
            a6[i] += t6 * gi; a7[i] += t7 * gi; a8[i] += t8 * gi;           \
        }                                                                   \
    }                                                                       \
}

TAP_FMA9_ROW(float)
TAP_FMA9_ROW(double)
