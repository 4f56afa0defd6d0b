#include "dynav/nn/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace dynav::nn {

std::size_t element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_string(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + ")";
}

Tensor::Tensor(std::vector<int> shape, double fill)
    : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != element_count(shape_)) {
    throw std::invalid_argument("tensor value count does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  return Tensor(std::move(shape), values_);
}

void Tensor::fill(double v) {
  for (double& x : values_) x = v;
}

void Tensor::add(const Tensor& other) {
  if (other.size() != size()) throw std::invalid_argument("tensor add: size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
}

void Tensor::scale(double s) {
  for (double& x : values_) x *= s;
}

double Tensor::dot(const Tensor& other) const {
  if (other.size() != size()) throw std::invalid_argument("tensor dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += values_[i] * other.values_[i];
  return acc;
}

bool Tensor::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 3 || b.ndim() != 3 || a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    throw std::invalid_argument("concat_channels: spatial mismatch " + shape_string(a.shape()) +
                                " vs " + shape_string(b.shape()));
  }
  std::vector<double> v(a.values().begin(), a.values().end());
  v.insert(v.end(), b.values().begin(), b.values().end());
  return Tensor({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)}, std::move(v));
}

Tensor concat_flat(std::initializer_list<const Tensor*> parts) {
  std::vector<double> v;
  for (const Tensor* p : parts) v.insert(v.end(), p->values().begin(), p->values().end());
  const int n = static_cast<int>(v.size());
  return Tensor({n}, std::move(v));
}

}  // namespace dynav::nn
