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

#ifndef FBRNN_MODEL_H_
#define FBRNN_MODEL_H_

// Forward-backward recurrent network over a candidate's three branches.
//
// Each token of a branch is fed as [word embedding ; branch embedding]
// to that branch's own stacked recurrent encoder. The left and nugget
// branches are read left to right, the right branch right to left. The
// final top-layer states are concatenated, passed through dropout and a
// tanh MLP, and scored by a softmax over all classes (NON_EVENT included)
// or by independent sigmoids over the event types.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbrnn/candidates.h"
#include "fbrnn/corpus.h"
#include "fbrnn/embeddings.h"
#include "fbrnn/numerics.h"

namespace fbrnn {

enum class CellKind { kGru, kLstm };
enum class HeadMode { kSoftmax, kSigmoid };
enum class Direction { kForward, kBackward };

std::string_view CellKindName(CellKind kind);
CellKind ParseCellKind(std::string_view name);
std::string_view HeadModeName(HeadMode mode);
HeadMode ParseHeadMode(std::string_view name);

struct ModelConfig {
  CellKind cell = CellKind::kGru;
  int word_dim = 300;
  int branch_dim = 20;
  bool use_branch = true;
  int hidden = 64;
  int layers = 1;
  HeadMode head = HeadMode::kSoftmax;
  int head_hidden = 64;
  int head_layers = 1;
  double dropout = 0.5;
  // Including NON_EVENT.
  int num_classes = 2;

  int InputWidth() const { return word_dim + (use_branch ? branch_dim : 0); }
  int OutputWidth() const {
    return head == HeadMode::kSoftmax ? num_classes : num_classes - 1;
  }
  void Validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// One gate's input matrix W [h x d_in], recurrent matrix U [h x h] and
// bias b [h], as indices into a ParamStore.
struct Gate {
  size_t w = 0;
  size_t u = 0;
  size_t b = 0;
};

// GRU gates in order {z, r, h~}; LSTM gates in order {i, f, o, g}.
struct CellParams {
  CellKind kind = CellKind::kGru;
  int input_dim = 0;
  int hidden = 0;
  std::vector<Gate> gates;
};

inline constexpr int kGruUpdate = 0, kGruReset = 1, kGruCandidate = 2;
inline constexpr int kLstmInput = 0, kLstmForget = 1, kLstmOutput = 2, kLstmCell = 3;

// Registers "<prefix>.W_<gate>", "<prefix>.U_<gate>", "<prefix>.b_<gate>".
CellParams AddCellParams(ParamStore& params, const std::string& prefix, CellKind kind,
                         int input_dim, int hidden, Rng& rng);

// z = s(Wz x + Uz h + bz), r = s(Wr x + Ur h + br),
// h~ = tanh(W x + U (r . h) + b), h' = (1 - z) . h + z . h~
std::vector<double> GruStep(const ParamStore& params, const CellParams& cell,
                            std::span<const double> x, std::span<const double> h_prev);

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};

// i, f, o = s(.), g = tanh(.), c' = f . c + i . g, h' = o . tanh(c')
LstmState LstmStep(const ParamStore& params, const CellParams& cell, std::span<const double> x,
                   std::span<const double> h_prev, std::span<const double> c_prev);

struct BranchEncoder {
  Branch branch = Branch::kLeft;
  Direction direction = Direction::kForward;
  std::vector<CellParams> layers;

  int hidden() const { return layers.empty() ? 0 : layers.back().hidden; }
};

// Activations of one recurrent layer over a sequence, kept for BPTT.
struct LayerTrace {
  struct Step {
    std::vector<double> x, h_prev, c_prev;
    std::vector<std::vector<double>> gates;
    std::vector<double> reset_h;  // GRU r . h_prev
    std::vector<double> c, tanh_c, h;
  };
  std::vector<Step> steps;
};

struct EncoderTrace {
  std::vector<LayerTrace> layers;
  std::vector<double> output;
};

// Runs the encoder over `inputs` given in token order; a kBackward encoder
// consumes them last to first. Returns the top layer's final state, or
// zeros for an empty sequence. The trace is filled when non-null.
std::vector<double> EncodeBranch(const ParamStore& params, const BranchEncoder& encoder,
                                 const std::vector<std::vector<double>>& inputs,
                                 EncoderTrace* trace = nullptr);

// Backpropagates d(output) through the trace, accumulating parameter
// gradients. Returns d(inputs) in token order.
std::vector<std::vector<double>> EncodeBranchBackward(ParamStore& params,
                                                      const BranchEncoder& encoder,
                                                      const EncoderTrace& trace,
                                                      std::span<const double> d_output);

struct Dense {
  size_t w = 0;
  size_t b = 0;
};

struct Head {
  HeadMode mode = HeadMode::kSoftmax;
  double dropout = 0.5;
  std::vector<Dense> hidden;  // tanh layers
  Dense out;
};

struct HeadTrace {
  std::vector<double> mask;
  std::vector<std::vector<double>> activations;  // [0] = masked concat
  std::vector<double> logits;
  std::vector<double> probs;
};

// concat [left; nugget; right] -> dropout (kTrain only) -> tanh MLP ->
// softmax over K classes or sigmoid over K - 1 types.
std::vector<double> Classify(const ParamStore& params, const Head& head,
                             std::span<const double> left, std::span<const double> nugget,
                             std::span<const double> right, Mode mode, Rng& rng,
                             HeadTrace* trace = nullptr);

inline constexpr double kLogClamp = 1e-12;

// -ln p[gold], with p clamped below at 1e-12.
double SoftmaxLoss(std::span<const double> probs, int gold_class);
// Sum of binary cross-entropies over the K - 1 type units; an empty gold
// set is NON_EVENT.
double SigmoidLoss(std::span<const double> probs, const std::vector<int>& gold_types);

// Softmax training target for a type set: its lowest class id, or
// NON_EVENT for an empty set.
int SoftmaxTarget(const std::vector<int>& gold_types);

// Softmax: argmax with ties to the lowest class, returned as {} for
// NON_EVENT or {class}. Sigmoid: every type with prob > threshold.
std::vector<int> DecideTypes(std::span<const double> dist, HeadMode mode, double threshold);

// Word ids per branch in token order.
struct EncodedExample {
  std::array<std::vector<int>, 3> ids;
};

class Fbrnn {
 public:
  Fbrnn() = default;
  // Random word table over `vocab`.
  Fbrnn(const ModelConfig& config, Vocabulary vocab, Rng& rng);
  Fbrnn(const ModelConfig& config, WordTable words, Rng& rng);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  const BranchEncoder& encoder(Branch b) const { return encoders_[static_cast<int>(b)]; }
  const Head& head() const { return head_; }
  const InputLayer& input_layer() const { return input_; }

  EncodedExample Encode(const Sentence& s, const NuggetCandidate& c) const;

  std::vector<std::vector<double>> BranchInputs(Branch b, const std::vector<int>& ids) const;

  // Class distribution (softmax) or per-type probabilities (sigmoid).
  std::vector<double> Distribution(const EncodedExample& ex, Mode mode, Rng& rng) const;
  std::vector<double> Distribution(const EncodedExample& ex) const;

  double Loss(const EncodedExample& ex, const std::vector<int>& gold_types, Mode mode,
              Rng& rng) const;

  // Full forward pass plus analytic backward pass; gradients are added to
  // the store's buffers (the caller zeroes them). Throws NumericError
  // naming the first tensor whose gradient is not finite.
  double ForwardBackward(const EncodedExample& ex, const std::vector<int>& gold_types,
                         Mode mode, Rng& rng);

  std::vector<int> Predict(const EncodedExample& ex, double threshold = 0.5) const;

 private:
  void Build(WordTable words, Rng& rng);

  ModelConfig config_;
  Vocabulary vocab_;
  ParamStore params_;
  InputLayer input_;
  std::array<BranchEncoder, 3> encoders_;
  Head head_;
};

// A random tiny model (6-token sentence, h=4, d_w=5, d_b=2, K=4 classes)
// with a random candidate and gold label, checked entry by entry against
// central differences with dropout disabled.
struct TinyGradCheckOptions {
  CellKind cell = CellKind::kGru;
  HeadMode head = HeadMode::kSoftmax;
  bool use_branch = true;
  int layers = 1;
  uint64_t seed = 7;
  double eps = 1e-5;
  double floor = 1e-8;  // relative-error denominator floor
};

GradCheckResult GradCheckTinyModel(const TinyGradCheckOptions& options);

}  // namespace fbrnn

#endif  // FBRNN_MODEL_H_
