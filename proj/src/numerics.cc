// Copyright 2026 The FBRNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fbrnn/numerics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbrnn/errors.h"

namespace fbrnn {

namespace {

uint64_t SplitMix64(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void CheckVector(std::string_view what, size_t expected, size_t got) {
  if (expected != got) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch, expected " << expected << " got " << got;
    throw ConfigError(msg.str());
  }
}

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
  uint64_t x = seed;
  for (auto& s : state_) s = SplitMix64(x);
}

uint64_t Rng::NextU64() {
  const uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::Below(uint64_t n) {
  if (n == 0) throw ConfigError("Rng::Below requires n > 0");
  // Lemire's multiply-shift with rejection.
  uint64_t x = NextU64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  uint64_t low = static_cast<uint64_t>(m);
  if (low < n) {
    const uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = NextU64();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

Rng Rng::Fork() { return Rng(NextU64()); }

size_t ShapeSize(const std::vector<size_t>& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const std::vector<size_t>& shape) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < shape.size(); ++i) out << (i ? "x" : "") << shape[i];
  out << "]";
  return out.str();
}

Tensor::Tensor(std::string name_in, std::vector<size_t> shape_in)
    : name(std::move(name_in)), shape(std::move(shape_in)) {
  if (shape.empty() || std::find(shape.begin(), shape.end(), 0u) != shape.end()) {
    throw ConfigError("tensor " + name + ": shape must be non-empty and positive, got " +
                      ShapeString(shape));
  }
  values.assign(ShapeSize(shape), 0.0);
  grad.assign(values.size(), 0.0);
}

void Tensor::ZeroGrad() { std::fill(grad.begin(), grad.end(), 0.0); }

size_t ParamStore::Add(Tensor tensor) {
  if (index_.count(tensor.name)) {
    throw ConfigError("duplicate parameter name: " + tensor.name);
  }
  const size_t idx = tensors_.size();
  index_.emplace(tensor.name, idx);
  tensors_.push_back(std::move(tensor));
  return idx;
}

std::optional<size_t> ParamStore::Find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t ParamStore::ParameterCount() const {
  size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void ParamStore::ZeroGrad() {
  for (auto& t : tensors_) t.ZeroGrad();
}

std::vector<double> MatVec(const Tensor& w, std::span<const double> x) {
  std::vector<double> out(w.rows(), 0.0);
  MatVecAdd(w, x, out);
  return out;
}

void MatVecAdd(const Tensor& w, std::span<const double> x, std::span<double> out) {
  CheckVector(w.name + " input", w.cols(), x.size());
  CheckVector(w.name + " output", w.rows(), out.size());
  const size_t n = w.cols();
  for (size_t r = 0; r < out.size(); ++r) {
    const double* row = w.values.data() + r * n;
    double acc = 0.0;
    for (size_t c = 0; c < n; ++c) acc += row[c] * x[c];
    out[r] += acc;
  }
}

void MatTVecAdd(const Tensor& w, std::span<const double> dy, std::span<double> dx) {
  CheckVector(w.name + " output grad", w.rows(), dy.size());
  CheckVector(w.name + " input grad", w.cols(), dx.size());
  const size_t n = w.cols();
  for (size_t r = 0; r < dy.size(); ++r) {
    const double* row = w.values.data() + r * n;
    const double g = dy[r];
    if (g == 0.0) continue;
    for (size_t c = 0; c < n; ++c) dx[c] += row[c] * g;
  }
}

void AccumulateOuter(Tensor& w, std::span<const double> dy, std::span<const double> x) {
  CheckVector(w.name + " grad rows", w.rows(), dy.size());
  CheckVector(w.name + " grad cols", w.cols(), x.size());
  const size_t n = w.cols();
  for (size_t r = 0; r < dy.size(); ++r) {
    const double g = dy[r];
    if (g == 0.0) continue;
    double* row = w.grad.data() + r * n;
    for (size_t c = 0; c < n; ++c) row[c] += g * x[c];
  }
}

void AccumulateBias(Tensor& b, std::span<const double> dy) {
  CheckVector(b.name + " grad", b.size(), dy.size());
  for (size_t i = 0; i < dy.size(); ++i) b.grad[i] += dy[i];
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> Sigmoid(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = Sigmoid(x[i]);
  return out;
}

std::vector<double> Tanh(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = std::tanh(x[i]);
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw ConfigError("softmax over zero classes");
  const double max = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

Tensor InitUniformScaled(std::string name, std::vector<size_t> shape, Rng& rng) {
  Tensor t(std::move(name), std::move(shape));
  const double fan_out = static_cast<double>(t.rows());
  const double fan_in = static_cast<double>(t.shape.size() < 2 ? 1 : t.cols());
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : t.values) v = rng.Uniform(-bound, bound);
  return t;
}

std::vector<double> DropoutMask(size_t n, double rate, Rng& rng, Mode mode) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  std::vector<double> mask(n, 1.0);
  if (mode == Mode::kEval || rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.Uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

void SgdStep(Tensor& p, double lr) {
  for (size_t i = 0; i < p.size(); ++i) p.values[i] -= lr * p.grad[i];
}

void AdamStep(Tensor& p, AdamMoments& moments, const AdamHyper& hyper, int64_t t) {
  if (moments.first.size() != p.size() || moments.second.size() != p.size()) {
    throw ConfigError("adam moments do not match tensor " + p.name);
  }
  if (t < 1) throw ConfigError("adam step number must be >= 1");
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));
  for (size_t i = 0; i < p.size(); ++i) {
    const double g = p.grad[i];
    double& m = moments.first[i];
    double& v = moments.second[i];
    m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
    v = hyper.beta2 * v + (1.0 - hyper.beta2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    p.values[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

std::string_view OptimizerKindName(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizerKind(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected adam|sgd)");
}

double GlobalGradNorm(const ParamStore& params) {
  double sq = 0.0;
  for (const auto& t : params) {
    for (double g : t.grad) sq += g * g;
  }
  return std::sqrt(sq);
}

double ClipGradNorm(ParamStore& params, double max_norm) {
  const double norm = GlobalGradNorm(params);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& t : params) {
      for (double& g : t.grad) g *= scale;
    }
  }
  return norm;
}

Optimizer::Optimizer(const OptimizerConfig& config, const ParamStore& params)
    : config_(config) {
  if (config_.kind == OptimizerKind::kAdam) {
    moments_.reserve(params.size());
    for (const auto& t : params) {
      moments_.push_back({std::vector<double>(t.size(), 0.0),
                          std::vector<double>(t.size(), 0.0)});
    }
  }
}

void Optimizer::Step(ParamStore& params) {
  if (config_.kind == OptimizerKind::kAdam && moments_.size() != params.size()) {
    throw ConfigError("optimizer state was built for a different parameter store");
  }
  if (config_.clip_norm > 0.0) ClipGradNorm(params, config_.clip_norm);
  ++step_count_;
  for (size_t i = 0; i < params.size(); ++i) {
    if (config_.kind == OptimizerKind::kAdam) {
      AdamStep(params.at(i), moments_[i], config_.adam, step_count_);
    } else {
      SgdStep(params.at(i), config_.sgd_lr);
    }
  }
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

GradCheckResult GradCheck(ParamStore& params, const LossFn& loss_fn, double eps,
                          double floor) {
  params.ZeroGrad();
  const double base = loss_fn(params);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const auto& t : params) analytic.push_back(t.grad);

  params.ZeroGrad();
  const double again = loss_fn(params);
  if (again != base) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "loss function is not deterministic: " << base << " vs " << again;
    throw NumericError(msg.str());
  }

  GradCheckResult result;
  for (size_t ti = 0; ti < params.size(); ++ti) {
    double tensor_max = 0.0;
    for (size_t i = 0; i < params.at(ti).size(); ++i) {
      double& x = params.at(ti).values[i];
      const double saved = x;
      x = saved + eps;
      const double plus = loss_fn(params);
      x = saved - eps;
      const double minus = loss_fn(params);
      x = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[ti][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double rel = std::abs(a - numeric) / denom;
      tensor_max = std::max(tensor_max, rel);
      ++result.entries_checked;
    }
    result.per_tensor.emplace_back(params.at(ti).name, tensor_max);
    if (result.worst_tensor.empty() || tensor_max > result.max_rel_error) {
      result.max_rel_error = tensor_max;
      result.worst_tensor = params.at(ti).name;
    }
  }
  for (size_t ti = 0; ti < params.size(); ++ti) params.at(ti).grad = analytic[ti];
  return result;
}

}  // namespace fbrnn
