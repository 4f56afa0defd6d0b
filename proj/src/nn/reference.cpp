// Straightforward serial kernels written directly from the index
// definitions. They share no code with the optimised versions.

#include <stdexcept>

#include "dynav/nn/layers.hpp"

namespace dynav::nn::reference {

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  if (w.dim(1) != C || kh > H || kw > W) throw std::invalid_argument("reference conv2d: shape mismatch");
  const int Ho = (H - kh) / s.h + 1, Wo = (W - kw) / s.w + 1;
  Tensor y({O, Ho, Wo});
  for (int o = 0; o < O; ++o)
    for (int i = 0; i < Ho; ++i)
      for (int j = 0; j < Wo; ++j) {
        double acc = bias.empty() ? 0.0 : bias[o];
        for (int c = 0; c < C; ++c)
          for (int m = 0; m < kh; ++m)
            for (int n = 0; n < kw; ++n)
              acc += x.at(c, i * s.h + m, j * s.w + n) * w[((o * C + c) * kh + m) * kw + n];
        y.at(o, i, j) = acc;
      }
  return y;
}

ConvGrads conv2d_backward(const Tensor& gy, const Tensor& x, const Tensor& w, Stride s,
                          bool with_bias) {
  const int C = x.dim(0);
  const int O = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int Ho = gy.dim(1), Wo = gy.dim(2);
  ConvGrads g{Tensor(x.shape()), Tensor(w.shape()), with_bias ? Tensor({O}) : Tensor()};
  for (int o = 0; o < O; ++o)
    for (int i = 0; i < Ho; ++i)
      for (int j = 0; j < Wo; ++j) {
        const double go = gy.at(o, i, j);
        if (with_bias) g.bias[o] += go;
        for (int c = 0; c < C; ++c)
          for (int m = 0; m < kh; ++m)
            for (int n = 0; n < kw; ++n) {
              const std::size_t wi = ((o * C + c) * kh + m) * kw + n;
              g.weight[wi] += go * x.at(c, i * s.h + m, j * s.w + n);
              g.input.at(c, i * s.h + m, j * s.w + n) += go * w[wi];
            }
      }
  return g;
}

Tensor tconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  if (w.dim(0) != C) throw std::invalid_argument("reference tconv2d: shape mismatch");
  Tensor y({O, (H - 1) * s.h + kh, (W - 1) * s.w + kw});
  for (int o = 0; o < O; ++o)
    for (int a = 0; a < y.dim(1); ++a)
      for (int b = 0; b < y.dim(2); ++b) y.at(o, a, b) = bias.empty() ? 0.0 : bias[o];
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < W; ++j)
        for (int o = 0; o < O; ++o)
          for (int m = 0; m < kh; ++m)
            for (int n = 0; n < kw; ++n)
              y.at(o, i * s.h + m, j * s.w + n) += x.at(c, i, j) * w[((c * O + o) * kh + m) * kw + n];
  return y;
}

ConvGrads tconv2d_backward(const Tensor& gy, const Tensor& x, const Tensor& w, Stride s,
                           bool with_bias) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  ConvGrads g{Tensor(x.shape()), Tensor(w.shape()), with_bias ? Tensor({O}) : Tensor()};
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < W; ++j)
        for (int o = 0; o < O; ++o)
          for (int m = 0; m < kh; ++m)
            for (int n = 0; n < kw; ++n) {
              const std::size_t wi = ((c * O + o) * kh + m) * kw + n;
              const double go = gy.at(o, i * s.h + m, j * s.w + n);
              g.input.at(c, i, j) += go * w[wi];
              g.weight[wi] += go * x.at(c, i, j);
            }
  if (with_bias) {
    for (int o = 0; o < O; ++o)
      for (int a = 0; a < gy.dim(1); ++a)
        for (int b = 0; b < gy.dim(2); ++b) g.bias[o] += gy.at(o, a, b);
  }
  return g;
}

}  // namespace dynav::nn::reference
