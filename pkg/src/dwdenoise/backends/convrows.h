#ifndef DWDENOISE_CONVROWS_H
#define DWDENOISE_CONVROWS_H

/* Row-level inner loops of the 3x3 convolution kernels. Kept in their
 * own translation unit so the restrict qualifiers survive and the
 * filter-axis loops vectorize independently of the calling code. */

void conv9_row_float(float *o, const float *r0, const float *r1,
                     const float *r2, const float *q, long w, long f);
void conv9_row_double(double *o, const double *r0, const double *r1,
                      const double *r2, const double *q, long w, long f);

void tap_fma9_row_float(float *acc, const float *grow, const float *r0,
                        const float *r1, const float *r2, long w, long f);
void tap_fma9_row_double(double *acc, const double *grow, const double *r0,
                         const double *r1, const double *r2, long w, long f);

#endif
