#include <stdexcept>

#include "dynav/nn/layers.hpp"

namespace dynav::nn {

Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& bias) {
  const int m = w.dim(0), n = w.dim(1);
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("linear: input size " + std::to_string(x.size()) + " != " + std::to_string(n));
  }
  Tensor y({m});
  for (int i = 0; i < m; ++i) {
    double acc = bias.empty() ? 0.0 : bias[i];
    const double* row = w.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

LinearGrads linear_backward(const Tensor& gy, const Tensor& x, const Tensor& w, bool with_bias) {
  const int m = w.dim(0), n = w.dim(1);
  if (static_cast<int>(gy.size()) != m) throw std::invalid_argument("linear_backward: grad size mismatch");
  LinearGrads g{Tensor(x.shape()), Tensor(w.shape()), with_bias ? Tensor({m}) : Tensor()};
  for (int i = 0; i < m; ++i) {
    const double go = gy[i];
    if (with_bias) g.bias[i] = go;
    if (go == 0.0) continue;
    const double* row = w.data() + static_cast<std::size_t>(i) * n;
    double* grow = g.weight.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      grow[j] = go * x[j];
      g.input[j] += go * row[j];
    }
  }
  return g;
}

Tensor relu_forward(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& gy, const Tensor& x) {
  Tensor g = gy;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(x[i] > 0.0)) g[i] = 0.0;
  }
  return g;
}

Tensor resize_nearest(const Tensor& x, int out_h, int out_w) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Tensor y({C, out_h, out_w});
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < out_h; ++i)
      for (int j = 0; j < out_w; ++j)
        y.at(c, i, j) = x.at(c, i * H / out_h, j * W / out_w);
  return y;
}

Tensor resize_nearest_backward(const Tensor& gy, int in_h, int in_w) {
  const int C = gy.dim(0), out_h = gy.dim(1), out_w = gy.dim(2);
  Tensor g({C, in_h, in_w});
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < out_h; ++i)
      for (int j = 0; j < out_w; ++j)
        g.at(c, i * in_h / out_h, j * in_w / out_w) += gy.at(c, i, j);
  return g;
}

}  // namespace dynav::nn
