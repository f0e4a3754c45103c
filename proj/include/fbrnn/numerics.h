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

#ifndef FBRNN_NUMERICS_H_
#define FBRNN_NUMERICS_H_

// Dense float64 kernel used by every layer of the model: named parameter
// tensors with gradient buffers, activations, initialization, dropout,
// optimizers and a finite-difference gradient checker.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fbrnn {

// xoshiro256** (Blackman & Vigna) with its state expanded from the seed by
// splitmix64 (increment 0x9e3779b97f4a7c15, mixers 0xbf58476d1ce4e5b9 and
// 0x94d049bb133111eb). All derived draws are computed here rather than
// through <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0);

  uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Unbiased integer in [0, n); n must be positive.
  uint64_t Below(uint64_t n);
  // Derives an independent generator; used to give subsystems their own
  // streams without coupling their draw counts.
  Rng Fork();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::array<uint64_t, 4> state_;
};

// A named, shaped parameter with a gradient buffer of the same size.
// Storage is row-major. 1-D tensors act as column vectors.
struct Tensor {
  std::string name;
  std::vector<size_t> shape;
  std::vector<double> values;
  std::vector<double> grad;

  Tensor() = default;
  Tensor(std::string name, std::vector<size_t> shape);

  size_t size() const { return values.size(); }
  size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  std::span<double> row(size_t r) { return {values.data() + r * cols(), cols()}; }
  std::span<const double> row(size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
  std::span<double> grad_row(size_t r) { return {grad.data() + r * cols(), cols()}; }

  void ZeroGrad();
};

size_t ShapeSize(const std::vector<size_t>& shape);
std::string ShapeString(const std::vector<size_t>& shape);

// Owns every trainable tensor of a model. Indices returned by Add are
// stable for the lifetime of the store.
class ParamStore {
 public:
  size_t Add(Tensor tensor);

  Tensor& at(size_t index) { return tensors_.at(index); }
  const Tensor& at(size_t index) const { return tensors_.at(index); }
  std::optional<size_t> Find(std::string_view name) const;

  size_t size() const { return tensors_.size(); }
  size_t ParameterCount() const;
  void ZeroGrad();

  std::vector<Tensor>::iterator begin() { return tensors_.begin(); }
  std::vector<Tensor>::iterator end() { return tensors_.end(); }
  std::vector<Tensor>::const_iterator begin() const { return tensors_.begin(); }
  std::vector<Tensor>::const_iterator end() const { return tensors_.end(); }

 private:
  std::vector<Tensor> tensors_;
  std::map<std::string, size_t, std::less<>> index_;
};

// y = W x. Throws ConfigError on dimension mismatch.
std::vector<double> MatVec(const Tensor& w, std::span<const double> x);
// out += W x
void MatVecAdd(const Tensor& w, std::span<const double> x, std::span<double> out);
// dx += W^T dy
void MatTVecAdd(const Tensor& w, std::span<const double> dy, std::span<double> dx);
// grad(W) += dy x^T
void AccumulateOuter(Tensor& w, std::span<const double> dy, std::span<const double> x);
// grad(b) += dy
void AccumulateBias(Tensor& b, std::span<const double> dy);

double Sigmoid(double x);
std::vector<double> Sigmoid(std::span<const double> x);
std::vector<double> Tanh(std::span<const double> x);
// Max-subtracted softmax; K must be at least 1.
std::vector<double> Softmax(std::span<const double> logits);

// Uniform in [-b, b], b = sqrt(6 / (fan_in + fan_out)). For 2-D shapes
// fan_out = rows and fan_in = cols; 1-D shapes use fan_in = 1.
Tensor InitUniformScaled(std::string name, std::vector<size_t> shape, Rng& rng);

enum class Mode { kTrain, kEval };

// Inverted dropout: entries are 0 with probability `rate`, otherwise
// 1 / (1 - rate). kEval returns all ones and draws nothing from rng.
std::vector<double> DropoutMask(size_t n, double rate, Rng& rng, Mode mode);

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamMoments {
  std::vector<double> first;
  std::vector<double> second;
};

void SgdStep(Tensor& p, double lr);
// Bias-corrected Adam update for step number t (1-based). Moments are
// updated in place; grad is left untouched.
void AdamStep(Tensor& p, AdamMoments& moments, const AdamHyper& hyper, int64_t t);

enum class OptimizerKind { kAdam, kSgd };

std::string_view OptimizerKindName(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  AdamHyper adam;
  double sgd_lr = 0.1;
  // Global-norm clipping threshold; non-positive disables clipping.
  double clip_norm = 5.0;
};

double GlobalGradNorm(const ParamStore& params);
// Rescales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradNorm(ParamStore& params, double max_norm);

class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const ParamStore& params);

  // Clips, then applies one update to every tensor of `params`.
  void Step(ParamStore& params);

  OptimizerKind kind() const { return config_.kind; }
  int64_t step_count() const { return step_count_; }
  const std::vector<AdamMoments>& moments() const { return moments_; }

 private:
  OptimizerConfig config_;
  int64_t step_count_ = 0;
  std::vector<AdamMoments> moments_;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  size_t entries_checked = 0;
  // Max relative error per tensor, in store order.
  std::vector<std::pair<std::string, double>> per_tensor;
};

// Evaluates loss and accumulates analytic gradients into `params`.
using LossFn = std::function<double(ParamStore&)>;

// Compares the analytic gradient of every parameter entry against the
// central difference (f(x+eps) - f(x-eps)) / (2 eps) using the relative
// error |a - n| / max(|a|, |n|, floor). Throws NumericError when two
// evaluations at the same point disagree. Values and gradients of `params`
// are restored to the analytic state on return.
GradCheckResult GradCheck(ParamStore& params, const LossFn& loss_fn,
                          double eps = 1e-5, double floor = 1e-8);

bool AllFinite(std::span<const double> values);

}  // namespace fbrnn

#endif  // FBRNN_NUMERICS_H_
