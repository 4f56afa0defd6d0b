#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dynav::nn {

/// Dense row-major double tensor.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  Tensor(std::vector<int> shape, std::vector<double> values);

  const std::vector<int>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[i]; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// 3-d accessor (c, h, w).
  double& at(int c, int h, int w) { return values_[(static_cast<std::size_t>(c) * shape_[1] + h) * shape_[2] + w]; }
  double at(int c, int h, int w) const { return values_[(static_cast<std::size_t>(c) * shape_[1] + h) * shape_[2] + w]; }

  /// Same values under a new shape with an equal element count.
  Tensor reshaped(std::vector<int> shape) const;
  void fill(double v);
  /// this += other (same size).
  void add(const Tensor& other);
  void scale(double s);
  double dot(const Tensor& other) const;
  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
};

std::size_t element_count(const std::vector<int>& shape);
std::string shape_string(const std::vector<int>& shape);

/// Channel-wise concatenation of 3-d tensors with equal spatial size.
Tensor concat_channels(const Tensor& a, const Tensor& b);
/// Concatenation of flat tensors.
Tensor concat_flat(std::initializer_list<const Tensor*> parts);

}  // namespace dynav::nn
