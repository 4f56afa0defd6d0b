#include "dynav/nn/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dynav/common/binary_io.hpp"

namespace dynav::nn {

Tensor& ParamStore::add(const std::string& name, std::vector<int> shape) {
  for (const auto& n : names_) {
    if (n == name) throw std::invalid_argument("duplicate parameter name " + name);
  }
  names_.push_back(name);
  values_.emplace_back(std::move(shape));
  return values_.back();
}

std::size_t ParamStore::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::out_of_range("no parameter named " + name);
}

std::size_t ParamStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

std::vector<Tensor> ParamStore::zeros_like() const {
  std::vector<Tensor> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.emplace_back(v.shape());
  return out;
}

bool ParamStore::same_values(const ParamStore& other) const {
  if (names_ != other.names_) return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] == other.values_[i])) return false;
  }
  return true;
}

void accumulate(GradBuffer& a, const GradBuffer& b) {
  if (a.size() != b.size()) throw std::invalid_argument("accumulate: buffer mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i].add(b[i]);
}

void scale(GradBuffer& g, double s) {
  for (auto& t : g) t.scale(s);
}

double global_norm(const GradBuffer& g) {
  double sq = 0.0;
  for (const auto& t : g) sq += t.dot(t);
  return std::sqrt(sq);
}

double clip_global_norm(GradBuffer& g, double max_norm) {
  const double norm = global_norm(g);
  if (norm > max_norm) scale(g, max_norm / norm);
  return norm;
}

void init_uniform(Tensor& t, int fan_in, Rng& rng, double gain) {
  const double a = gain * std::sqrt(3.0 / std::max(1, fan_in));
  for (double& v : t.values()) v = (2.0 * rng.uniform() - 1.0) * a;
}

Adam::Adam(const ParamStore& params, AdamConfig cfg)
    : cfg_(cfg), m_(params.zeros_like()), v_(params.zeros_like()) {}

void Adam::step(ParamStore& params, const GradBuffer& grads, double lr) {
  if (grads.size() != params.size()) throw std::invalid_argument("adam: gradient buffer mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = params.value(k);
    const Tensor& g = grads[k];
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void save_checkpoint(const ParamStore& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write("DAVN", 4);
  io::write_le<std::uint32_t>(out, kCheckpointVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& name = params.name(k);
    const auto& t = params.value(k);
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.ndim()));
    for (int d : t.shape()) io::write_i32(out, d);
    for (double v : t.values()) io::write_f64(out, v);
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

void load_checkpoint(ParamStore& params, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "DAVN") {
    throw std::runtime_error("not a checkpoint file: " + path.string());
  }
  if (io::read_le<std::uint32_t>(in) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version");
  }
  const auto count = io::read_le<std::uint32_t>(in);
  if (count != params.size()) throw std::runtime_error("checkpoint parameter count mismatch");
  for (std::size_t k = 0; k < count; ++k) {
    const auto len = io::read_le<std::uint32_t>(in);
    std::string name(len, '\0');
    if (len > 4096 || !in.read(name.data(), len)) throw std::runtime_error("corrupt checkpoint name");
    if (name != params.name(k)) throw std::runtime_error("checkpoint parameter " + name + " out of order");
    Tensor& t = params.value(k);
    const auto nd = io::read_le<std::uint32_t>(in);
    if (static_cast<int>(nd) != t.ndim()) throw std::runtime_error("checkpoint rank mismatch for " + name);
    for (std::uint32_t d = 0; d < nd; ++d) {
      if (io::read_i32(in) != t.dim(static_cast<int>(d))) {
        throw std::runtime_error("checkpoint shape mismatch for " + name);
      }
    }
    for (double& v : t.values()) v = io::read_f64(in);
  }
}

}  // namespace dynav::nn
