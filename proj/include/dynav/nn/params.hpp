#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "dynav/common/rng.hpp"
#include "dynav/nn/tensor.hpp"

namespace dynav::nn {

/// Ordered, named parameter tensors. References returned by add() stay
/// valid for the store's lifetime.
class ParamStore {
 public:
  Tensor& add(const std::string& name, std::vector<int> shape);
  std::size_t size() const { return values_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Tensor& value(std::size_t i) { return values_[i]; }
  const Tensor& value(std::size_t i) const { return values_[i]; }
  /// Index of `name`; throws std::out_of_range when absent.
  std::size_t index_of(const std::string& name) const;
  std::size_t parameter_count() const;
  /// Zero tensors shaped like every parameter, in store order.
  std::vector<Tensor> zeros_like() const;
  bool same_values(const ParamStore& other) const;

 private:
  std::vector<std::string> names_;
  std::deque<Tensor> values_;
};

using GradBuffer = std::vector<Tensor>;

/// Elementwise a += b over aligned buffers.
void accumulate(GradBuffer& a, const GradBuffer& b);
void scale(GradBuffer& g, double s);
double global_norm(const GradBuffer& g);
/// Rescales all gradients by max_norm / norm when the global L2 norm
/// exceeds max_norm. Returns the norm before clipping.
double clip_global_norm(GradBuffer& g, double max_norm = 0.5);

/// Uniform(-a, a) fill with a = gain * sqrt(3 / fan_in).
void init_uniform(Tensor& t, int fan_in, Rng& rng, double gain = 1.0);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-5;
};

class Adam {
 public:
  Adam(const ParamStore& params, AdamConfig cfg = {});
  void step(ParamStore& params, const GradBuffer& grads, double lr);
  std::int64_t steps() const { return t_; }
  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

 private:
  AdamConfig cfg_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::int64_t t_ = 0;
};

/// Checkpoint: "DAVN", uint32 version, uint32 record count, then per
/// record: uint32 name length, name bytes, uint32 ndims, int32 dims,
/// float64 values, all little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;
void save_checkpoint(const ParamStore& params, const std::filesystem::path& path);
/// Loads into an existing store, requiring identical names and shapes.
/// Throws std::runtime_error on format or layout mismatch.
void load_checkpoint(ParamStore& params, const std::filesystem::path& path);

}  // namespace dynav::nn
