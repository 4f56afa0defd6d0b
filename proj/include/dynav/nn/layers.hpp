#pragma once

#include "dynav/nn/tensor.hpp"

namespace dynav::nn {

struct Stride {
  int h = 1;
  int w = 1;
};

/// Output size of a valid (unpadded) convolution along one axis.
int conv_out_size(int in, int kernel, int stride);
/// Output size of a transposed convolution along one axis.
int tconv_out_size(int in, int kernel, int stride);

struct ConvGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;  // empty when the layer has none
};

/// Cross-correlation y[o,i,j] = b[o] + sum_c,m,n x[c, i*sh+m, j*sw+n] w[o,c,m,n].
/// x: (C,H,W), w: (O,C,kh,kw), bias: (O) or empty. OpenMP over channels.
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s);
ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& x, const Tensor& w, Stride s,
                          bool with_bias);

/// Adjoint of conv2d_forward: y[o, i*sh+m, j*sw+n] += x[c,i,j] w[c,o,m,n].
/// x: (C,H,W), w: (C,O,kh,kw), bias: (O) or empty.
Tensor tconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s);
ConvGrads tconv2d_backward(const Tensor& grad_out, const Tensor& x, const Tensor& w, Stride s,
                           bool with_bias);

struct LinearGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;
};

/// y = W x + b for flat x of size n, W: (m, n), b: (m) or empty.
Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& bias);
LinearGrads linear_backward(const Tensor& grad_out, const Tensor& x, const Tensor& w, bool with_bias);

Tensor relu_forward(const Tensor& x);
/// Gradient through max(0, x) given the forward input.
Tensor relu_backward(const Tensor& grad_out, const Tensor& x);

/// Nearest-neighbour resampling of a (C,H,W) tensor; source index
/// floor(i * H / out_h).
Tensor resize_nearest(const Tensor& x, int out_h, int out_w);
Tensor resize_nearest_backward(const Tensor& grad_out, int in_h, int in_w);

namespace reference {
// Serial, loop-per-definition versions kept for testing and benchmarking.
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s);
ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& x, const Tensor& w, Stride s,
                          bool with_bias);
Tensor tconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s);
ConvGrads tconv2d_backward(const Tensor& grad_out, const Tensor& x, const Tensor& w, Stride s,
                           bool with_bias);
}  // namespace reference

}  // namespace dynav::nn
