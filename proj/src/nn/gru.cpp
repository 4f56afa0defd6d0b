#include "dynav/nn/gru.hpp"

#include <cmath>
#include <stdexcept>

namespace dynav::nn {

GruParams GruParams::zeros(int input, int hidden) {
  return {Tensor({hidden, input}), Tensor({hidden, hidden}), Tensor({hidden, input}),
          Tensor({hidden, hidden}), Tensor({hidden, input}), Tensor({hidden, hidden})};
}

namespace {

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// out[i] = sum_j A[i,j] v[j]
void matvec_add(const Tensor& A, const Tensor& v, double* out) {
  const int m = A.dim(0), n = A.dim(1);
  for (int i = 0; i < m; ++i) {
    const double* row = A.data() + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * v[j];
    out[i] += acc;
  }
}

// out[j] += sum_i A[i,j] g[i]
void matvec_t_add(const Tensor& A, const double* g, Tensor& out) {
  const int m = A.dim(0), n = A.dim(1);
  for (int i = 0; i < m; ++i) {
    if (g[i] == 0.0) continue;
    const double* row = A.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) out[j] += row[j] * g[i];
  }
}

// G[i,j] += g[i] v[j]
void outer_add(Tensor& G, const double* g, const Tensor& v) {
  const int m = G.dim(0), n = G.dim(1);
  for (int i = 0; i < m; ++i) {
    if (g[i] == 0.0) continue;
    double* row = G.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) row[j] += g[i] * v[j];
  }
}


template <typename P>
Tensor cell_impl(const Tensor& x, const Tensor& h_prev, const P& p, GruCache* cache) {
  const int H = p.W_r.dim(0);
  if (static_cast<int>(x.size()) != p.W_r.dim(1) || static_cast<int>(h_prev.size()) != H) {
    throw std::invalid_argument("gru_cell: shape mismatch");
  }
  Tensor r({H}), z({H}), ht({H}), rh({H}), h({H});
  matvec_add(p.W_r, x, r.data());
  matvec_add(p.U_r, h_prev, r.data());
  matvec_add(p.W_z, x, z.data());
  matvec_add(p.U_z, h_prev, z.data());
  for (int i = 0; i < H; ++i) {
    r[i] = sigmoid(r[i]);
    z[i] = sigmoid(z[i]);
    rh[i] = r[i] * h_prev[i];
  }
  matvec_add(p.W, x, ht.data());
  matvec_add(p.U, rh, ht.data());
  for (int i = 0; i < H; ++i) {
    ht[i] = std::tanh(ht[i]);
    h[i] = z[i] * h_prev[i] + (1.0 - z[i]) * ht[i];
  }
  if (cache) *cache = {x, h_prev, r, z, ht, rh};
  return h;
}

template <typename P>
GruGrads backward_impl(const Tensor& gh, const GruCache& c, const P& p) {
  const int H = p.W_r.dim(0);
  GruGrads g{Tensor(c.x.shape()), Tensor(c.h_prev.shape()), GruParams::zeros(p.W_r.dim(1), H)};
  std::vector<double> da_h(H), da_r(H), da_z(H), g_rh(H, 0.0);
  for (int i = 0; i < H; ++i) {
    const double gz = gh[i] * (c.h_prev[i] - c.h_tilde[i]);
    const double ght = gh[i] * (1.0 - c.z[i]);
    g.h_prev[i] = gh[i] * c.z[i];
    da_h[i] = ght * (1.0 - c.h_tilde[i] * c.h_tilde[i]);
    da_z[i] = gz * c.z[i] * (1.0 - c.z[i]);
  }
  outer_add(g.params.W, da_h.data(), c.x);
  outer_add(g.params.U, da_h.data(), c.rh);
  matvec_t_add(p.W, da_h.data(), g.x);
  Tensor rh_grad({H});
  matvec_t_add(p.U, da_h.data(), rh_grad);
  for (int i = 0; i < H; ++i) {
    g.h_prev[i] += rh_grad[i] * c.r[i];
    const double gr = rh_grad[i] * c.h_prev[i];
    da_r[i] = gr * c.r[i] * (1.0 - c.r[i]);
  }
  outer_add(g.params.W_r, da_r.data(), c.x);
  outer_add(g.params.U_r, da_r.data(), c.h_prev);
  outer_add(g.params.W_z, da_z.data(), c.x);
  outer_add(g.params.U_z, da_z.data(), c.h_prev);
  matvec_t_add(p.W_r, da_r.data(), g.x);
  matvec_t_add(p.W_z, da_z.data(), g.x);
  matvec_t_add(p.U_r, da_r.data(), g.h_prev);
  matvec_t_add(p.U_z, da_z.data(), g.h_prev);
  return g;
}

}  // namespace

Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& p, GruCache* cache) {
  return cell_impl(x, h_prev, p, cache);
}

Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruRefs& p, GruCache* cache) {
  return cell_impl(x, h_prev, p, cache);
}

GruGrads gru_cell_backward(const Tensor& grad_h, const GruCache& cache, const GruParams& p) {
  return backward_impl(grad_h, cache, p);
}

GruGrads gru_cell_backward(const Tensor& grad_h, const GruCache& cache, const GruRefs& p) {
  return backward_impl(grad_h, cache, p);
}

}  // namespace dynav::nn
