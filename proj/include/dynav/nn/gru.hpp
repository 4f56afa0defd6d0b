#pragma once

#include "dynav/nn/tensor.hpp"

namespace dynav::nn {

/// Bias-free GRU weights: W* are (hidden, input), U* are (hidden, hidden).
struct GruParams {
  Tensor W_r, U_r, W_z, U_z, W, U;

  int input_size() const { return W_r.dim(1); }
  int hidden_size() const { return W_r.dim(0); }
  static GruParams zeros(int input, int hidden);
};

/// Non-owning view of GRU weights held elsewhere (e.g. in a ParamStore).
struct GruRefs {
  const Tensor& W_r;
  const Tensor& U_r;
  const Tensor& W_z;
  const Tensor& U_z;
  const Tensor& W;
  const Tensor& U;
};

/// Intermediates kept for the backward pass.
struct GruCache {
  Tensor x, h_prev, r, z, h_tilde, rh;
};

/// r = s(W_r x + U_r h), z = s(W_z x + U_z h), h~ = tanh(W x + U (r*h)),
/// h' = z*h + (1-z)*h~.
Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& p, GruCache* cache = nullptr);
Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruRefs& p, GruCache* cache = nullptr);

struct GruGrads {
  Tensor x, h_prev;
  GruParams params;
};

/// Gradients of a loss given dL/dh' at this step.
GruGrads gru_cell_backward(const Tensor& grad_h, const GruCache& cache, const GruParams& p);
GruGrads gru_cell_backward(const Tensor& grad_h, const GruCache& cache, const GruRefs& p);

}  // namespace dynav::nn
