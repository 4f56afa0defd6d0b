#include <stdexcept>

#include "dynav/nn/layers.hpp"

namespace dynav::nn {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr long kParallelWork = 1 << 15;

void check_conv(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s, int out_channels) {
  if (x.ndim() != 3 || w.ndim() != 4) throw std::invalid_argument("conv: expected (C,H,W) input and 4-d kernel");
  if (s.h < 1 || s.w < 1) throw std::invalid_argument("conv: stride must be positive");
  if (!bias.empty() && (bias.ndim() != 1 || bias.dim(0) != out_channels)) {
    throw std::invalid_argument("conv: bias shape mismatch");
  }
}

}  // namespace

int conv_out_size(int in, int kernel, int stride) {
  if (kernel > in) throw std::invalid_argument("conv: kernel larger than input");
  return (in - kernel) / stride + 1;
}

int tconv_out_size(int in, int kernel, int stride) { return (in - 1) * stride + kernel; }

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s) {
  check_conv(x, w, bias, s, w.ndim() == 4 ? w.dim(0) : 0);
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  if (w.dim(1) != C) throw std::invalid_argument("conv2d: channel mismatch");
  const int Ho = conv_out_size(H, kh, s.h), Wo = conv_out_size(W, kw, s.w);
  Tensor y({O, Ho, Wo});
  const double* xp = x.data();
  const double* wp = w.data();
  double* yp = y.data();
  const long work = static_cast<long>(O) * Ho * Wo * C * kh * kw;
#pragma omp parallel for schedule(static) if (work > kParallelWork)
  for (int o = 0; o < O; ++o) {
    const double b = bias.empty() ? 0.0 : bias[o];
    for (int i = 0; i < Ho; ++i) {
      for (int j = 0; j < Wo; ++j) {
        double acc = b;
        for (int c = 0; c < C; ++c) {
          const double* wk = wp + ((static_cast<std::size_t>(o) * C + c) * kh) * kw;
          const double* xr = xp + (static_cast<std::size_t>(c) * H + i * s.h) * W + j * s.w;
          for (int m = 0; m < kh; ++m) {
            for (int n = 0; n < kw; ++n) acc += xr[m * W + n] * wk[m * kw + n];
          }
        }
        yp[(static_cast<std::size_t>(o) * Ho + i) * Wo + j] = acc;
      }
    }
  }
  return y;
}

ConvGrads conv2d_backward(const Tensor& gy, const Tensor& x, const Tensor& w, Stride s,
                          bool with_bias) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int Ho = conv_out_size(H, kh, s.h), Wo = conv_out_size(W, kw, s.w);
  if (gy.ndim() != 3 || gy.dim(0) != O || gy.dim(1) != Ho || gy.dim(2) != Wo) {
    throw std::invalid_argument("conv2d_backward: grad_out shape mismatch");
  }
  ConvGrads g{Tensor(x.shape()), Tensor(w.shape()), with_bias ? Tensor({O}) : Tensor()};
  const double* xp = x.data();
  const double* wp = w.data();
  const double* gp = gy.data();
  const long work = static_cast<long>(O) * Ho * Wo * C * kh * kw;

  // Kernel and bias gradients: each output channel owns its slice.
  double* gwp = g.weight.data();
#pragma omp parallel for schedule(static) if (work > kParallelWork)
  for (int o = 0; o < O; ++o) {
    double gb = 0.0;
    for (int i = 0; i < Ho; ++i) {
      for (int j = 0; j < Wo; ++j) {
        const double go = gp[(static_cast<std::size_t>(o) * Ho + i) * Wo + j];
        gb += go;
        if (go == 0.0) continue;
        for (int c = 0; c < C; ++c) {
          double* gk = gwp + ((static_cast<std::size_t>(o) * C + c) * kh) * kw;
          const double* xr = xp + (static_cast<std::size_t>(c) * H + i * s.h) * W + j * s.w;
          for (int m = 0; m < kh; ++m) {
            for (int n = 0; n < kw; ++n) gk[m * kw + n] += go * xr[m * W + n];
          }
        }
      }
    }
    if (with_bias) g.bias[o] = gb;
  }

  // Input gradient: each input channel owns its slice.
  double* gxp = g.input.data();
#pragma omp parallel for schedule(static) if (work > kParallelWork)
  for (int c = 0; c < C; ++c) {
    double* gx = gxp + static_cast<std::size_t>(c) * H * W;
    for (int o = 0; o < O; ++o) {
      const double* wk = wp + ((static_cast<std::size_t>(o) * C + c) * kh) * kw;
      for (int i = 0; i < Ho; ++i) {
        for (int j = 0; j < Wo; ++j) {
          const double go = gp[(static_cast<std::size_t>(o) * Ho + i) * Wo + j];
          if (go == 0.0) continue;
          double* gr = gx + (i * s.h) * W + j * s.w;
          for (int m = 0; m < kh; ++m) {
            for (int n = 0; n < kw; ++n) gr[m * W + n] += go * wk[m * kw + n];
          }
        }
      }
    }
  }
  return g;
}

Tensor tconv2d_forward(const Tensor& x, const Tensor& w, const Tensor& bias, Stride s) {
  check_conv(x, w, bias, s, w.ndim() == 4 ? w.dim(1) : 0);
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  if (w.dim(0) != C) throw std::invalid_argument("tconv2d: channel mismatch");
  const int Ho = tconv_out_size(H, kh, s.h), Wo = tconv_out_size(W, kw, s.w);
  Tensor y({O, Ho, Wo});
  const double* xp = x.data();
  const double* wp = w.data();
  double* yp = y.data();
  const long work = static_cast<long>(O) * H * W * C * kh * kw;
#pragma omp parallel for schedule(static) if (work > kParallelWork)
  for (int o = 0; o < O; ++o) {
    double* yo = yp + static_cast<std::size_t>(o) * Ho * Wo;
    const double b = bias.empty() ? 0.0 : bias[o];
    for (int k = 0; k < Ho * Wo; ++k) yo[k] = b;
    for (int c = 0; c < C; ++c) {
      const double* wk = wp + ((static_cast<std::size_t>(c) * O + o) * kh) * kw;
      const double* xc = xp + static_cast<std::size_t>(c) * H * W;
      for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
          const double xv = xc[i * W + j];
          if (xv == 0.0) continue;
          double* yr = yo + (i * s.h) * Wo + j * s.w;
          for (int m = 0; m < kh; ++m) {
            for (int n = 0; n < kw; ++n) yr[m * Wo + n] += xv * wk[m * kw + n];
          }
        }
      }
    }
  }
  return y;
}

ConvGrads tconv2d_backward(const Tensor& gy, const Tensor& x, const Tensor& w, Stride s,
                           bool with_bias) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int O = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  const int Ho = tconv_out_size(H, kh, s.h), Wo = tconv_out_size(W, kw, s.w);
  if (gy.ndim() != 3 || gy.dim(0) != O || gy.dim(1) != Ho || gy.dim(2) != Wo) {
    throw std::invalid_argument("tconv2d_backward: grad_out shape mismatch");
  }
  ConvGrads g{Tensor(x.shape()), Tensor(w.shape()), with_bias ? Tensor({O}) : Tensor()};
  const double* xp = x.data();
  const double* wp = w.data();
  const double* gp = gy.data();
  const long work = static_cast<long>(O) * H * W * C * kh * kw;

  double* gxp = g.input.data();
  double* gwp = g.weight.data();
#pragma omp parallel for schedule(static) if (work > kParallelWork)
  for (int c = 0; c < C; ++c) {
    const double* xc = xp + static_cast<std::size_t>(c) * H * W;
    double* gx = gxp + static_cast<std::size_t>(c) * H * W;
    for (int o = 0; o < O; ++o) {
      const double* wk = wp + ((static_cast<std::size_t>(c) * O + o) * kh) * kw;
      double* gk = gwp + ((static_cast<std::size_t>(c) * O + o) * kh) * kw;
      const double* go = gp + static_cast<std::size_t>(o) * Ho * Wo;
      for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
          const double xv = xc[i * W + j];
          const double* gr = go + (i * s.h) * Wo + j * s.w;
          double acc = 0.0;
          for (int m = 0; m < kh; ++m) {
            for (int n = 0; n < kw; ++n) {
              acc += gr[m * Wo + n] * wk[m * kw + n];
              gk[m * kw + n] += xv * gr[m * Wo + n];
            }
          }
          gx[i * W + j] += acc;
        }
      }
    }
  }
  if (with_bias) {
    for (int o = 0; o < O; ++o) {
      double acc = 0.0;
      for (int k = 0; k < Ho * Wo; ++k) acc += gp[static_cast<std::size_t>(o) * Ho * Wo + k];
      g.bias[o] = acc;
    }
  }
  return g;
}

}  // namespace dynav::nn
