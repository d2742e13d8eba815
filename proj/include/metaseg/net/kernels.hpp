#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel layer kernels. Every kernel assigns each output element to
// exactly one loop iteration with a fixed internal summation order, so
// results are bit-identical for any OMP thread count. The serial namespace
// holds naive single-threaded reference implementations used by the tests
// and the benchmark.

namespace metaseg::kernels {

// k x k convolution with same padding (k odd). Weights w[cout][cin][k][k].
template <typename T>
void conv_forward(const T* in, const T* w, const T* bias, T* out,
                  int n, int cin, int cout, int h, int wd, int k);

template <typename T>
void conv_backward_input(const T* gout, const T* w, T* gin,
                         int n, int cin, int cout, int h, int wd, int k);

// Accumulates into gw/gb (callers zero them at step start).
template <typename T>
void conv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                          int n, int cin, int cout, int h, int wd, int k);

// 2x2 stride-2 transposed convolution; out is (n, cout, 2h, 2w).
// Weights w[cin][cout][2][2].
template <typename T>
void upconv_forward(const T* in, const T* w, const T* bias, T* out,
                    int n, int cin, int cout, int h, int wd);

template <typename T>
void upconv_backward_input(const T* gout, const T* w, T* gin,
                           int n, int cin, int cout, int h, int wd);

template <typename T>
void upconv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                            int n, int cin, int cout, int h, int wd);

// 2x2 stride-2 max pooling; argmax in 0..3 (dy*2+dx), first winner on ties.
template <typename T>
void maxpool_forward(const T* in, T* out, uint8_t* argmax,
                     int n, int c, int h, int wd);

template <typename T>
void maxpool_backward(const T* gout, const uint8_t* argmax, T* gin,
                      int n, int c, int h, int wd);

template <typename T>
void relu_forward(T* x, size_t count);

// g *= (out > 0), with out the post-ReLU activation.
template <typename T>
void relu_backward(const T* out, T* g, size_t count);

// Batch statistics over (n, h, w) per channel; biased variance. Stats are
// accumulated in double regardless of T.
template <typename T>
void bn_forward_train(const T* in, const T* gamma, const T* beta, T* out,
                      T* xhat, T* mean, T* var,
                      int n, int c, int h, int wd, T eps);

template <typename T>
void bn_forward_eval(const T* in, const T* gamma, const T* beta,
                     const T* rmean, const T* rvar, T* out,
                     int n, int c, int h, int wd, T eps);

// Full gradient through the batch statistics. ggamma/gbeta accumulate.
template <typename T>
void bn_backward(const T* gout, const T* xhat, const T* gamma, const T* var,
                 T* gin, T* ggamma, T* gbeta,
                 int n, int c, int h, int wd, T eps);

template <typename T>
void sigmoid_forward(const T* in, T* out, size_t count);

namespace serial {

template <typename T>
void conv_forward(const T* in, const T* w, const T* bias, T* out,
                  int n, int cin, int cout, int h, int wd, int k);

template <typename T>
void conv_backward_input(const T* gout, const T* w, T* gin,
                         int n, int cin, int cout, int h, int wd, int k);

template <typename T>
void conv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                          int n, int cin, int cout, int h, int wd, int k);

template <typename T>
void upconv_forward(const T* in, const T* w, const T* bias, T* out,
                    int n, int cin, int cout, int h, int wd);

template <typename T>
void maxpool_forward(const T* in, T* out, uint8_t* argmax,
                     int n, int c, int h, int wd);

template <typename T>
void bn_forward_train(const T* in, const T* gamma, const T* beta, T* out,
                      T* xhat, T* mean, T* var,
                      int n, int c, int h, int wd, T eps);

} // namespace serial

} // namespace metaseg::kernels
