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

#include "fbrnn/model.h"

#include <algorithm>
#include <cmath>

#include "fbrnn/errors.h"

namespace fbrnn {

namespace {

constexpr std::array<const char*, 3> kGruGateNames = {"z", "r", "h"};
constexpr std::array<const char*, 4> kLstmGateNames = {"i", "f", "o", "g"};

std::vector<double> Zeros(size_t n) { return std::vector<double>(n, 0.0); }

// W x + U h + b for one gate.
std::vector<double> GatePreactivation(const ParamStore& params, const Gate& gate,
                                      std::span<const double> x, std::span<const double> h) {
  std::vector<double> a = params.at(gate.b).values;
  MatVecAdd(params.at(gate.w), x, a);
  MatVecAdd(params.at(gate.u), h, a);
  return a;
}

void CheckStepShapes(const CellParams& cell, std::span<const double> x,
                     std::span<const double> h_prev) {
  if (static_cast<int>(x.size()) != cell.input_dim ||
      static_cast<int>(h_prev.size()) != cell.hidden) {
    throw ConfigError("cell step: expected input " + std::to_string(cell.input_dim) +
                      " and state " + std::to_string(cell.hidden) + ", got " +
                      std::to_string(x.size()) + " and " + std::to_string(h_prev.size()));
  }
}

void GruForward(const ParamStore& params, const CellParams& cell, LayerTrace::Step& st) {
  CheckStepShapes(cell, st.x, st.h_prev);
  const size_t h = cell.hidden;
  st.gates.resize(3);
  st.gates[kGruUpdate] = Sigmoid(GatePreactivation(params, cell.gates[kGruUpdate], st.x, st.h_prev));
  st.gates[kGruReset] = Sigmoid(GatePreactivation(params, cell.gates[kGruReset], st.x, st.h_prev));
  st.reset_h.resize(h);
  for (size_t k = 0; k < h; ++k) st.reset_h[k] = st.gates[kGruReset][k] * st.h_prev[k];
  st.gates[kGruCandidate] =
      Tanh(GatePreactivation(params, cell.gates[kGruCandidate], st.x, st.reset_h));
  st.h.resize(h);
  const auto& z = st.gates[kGruUpdate];
  const auto& hc = st.gates[kGruCandidate];
  for (size_t k = 0; k < h; ++k) st.h[k] = (1.0 - z[k]) * st.h_prev[k] + z[k] * hc[k];
}

void LstmForward(const ParamStore& params, const CellParams& cell, LayerTrace::Step& st) {
  CheckStepShapes(cell, st.x, st.h_prev);
  const size_t h = cell.hidden;
  st.gates.resize(4);
  for (int g : {kLstmInput, kLstmForget, kLstmOutput}) {
    st.gates[g] = Sigmoid(GatePreactivation(params, cell.gates[g], st.x, st.h_prev));
  }
  st.gates[kLstmCell] = Tanh(GatePreactivation(params, cell.gates[kLstmCell], st.x, st.h_prev));
  st.c.resize(h);
  st.tanh_c.resize(h);
  st.h.resize(h);
  for (size_t k = 0; k < h; ++k) {
    st.c[k] = st.gates[kLstmForget][k] * st.c_prev[k] +
              st.gates[kLstmInput][k] * st.gates[kLstmCell][k];
    st.tanh_c[k] = std::tanh(st.c[k]);
    st.h[k] = st.gates[kLstmOutput][k] * st.tanh_c[k];
  }
}

// Accumulates one gate's parameter gradients from d(preactivation) and
// propagates into dx and dh (the recurrent input of that gate).
void GateBackward(ParamStore& params, const Gate& gate, std::span<const double> da,
                  std::span<const double> x, std::span<const double> h_in,
                  std::span<double> dx, std::span<double> dh_in) {
  AccumulateOuter(params.at(gate.w), da, x);
  AccumulateOuter(params.at(gate.u), da, h_in);
  AccumulateBias(params.at(gate.b), da);
  MatTVecAdd(params.at(gate.w), da, dx);
  MatTVecAdd(params.at(gate.u), da, dh_in);
}

// dh: gradient w.r.t. this step's h. Returns via dx / dh_prev.
void GruBackward(ParamStore& params, const CellParams& cell, const LayerTrace::Step& st,
                 std::span<const double> dh, std::span<double> dx, std::span<double> dh_prev) {
  const size_t h = cell.hidden;
  const auto& z = st.gates[kGruUpdate];
  const auto& r = st.gates[kGruReset];
  const auto& hc = st.gates[kGruCandidate];
  std::vector<double> da_z(h), da_r(h), da_h(h), d_reset_h(h, 0.0);
  for (size_t k = 0; k < h; ++k) {
    dh_prev[k] += dh[k] * (1.0 - z[k]);
    da_z[k] = dh[k] * (hc[k] - st.h_prev[k]) * z[k] * (1.0 - z[k]);
    da_h[k] = dh[k] * z[k] * (1.0 - hc[k] * hc[k]);
  }
  GateBackward(params, cell.gates[kGruCandidate], da_h, st.x, st.reset_h, dx, d_reset_h);
  for (size_t k = 0; k < h; ++k) {
    dh_prev[k] += d_reset_h[k] * r[k];
    da_r[k] = d_reset_h[k] * st.h_prev[k] * r[k] * (1.0 - r[k]);
  }
  GateBackward(params, cell.gates[kGruUpdate], da_z, st.x, st.h_prev, dx, dh_prev);
  GateBackward(params, cell.gates[kGruReset], da_r, st.x, st.h_prev, dx, dh_prev);
}

// dh, dc: gradients w.r.t. this step's h and c (c from the next step).
void LstmBackward(ParamStore& params, const CellParams& cell, const LayerTrace::Step& st,
                  std::span<const double> dh, std::span<const double> dc,
                  std::span<double> dx, std::span<double> dh_prev, std::span<double> dc_prev) {
  const size_t h = cell.hidden;
  const auto& i = st.gates[kLstmInput];
  const auto& f = st.gates[kLstmForget];
  const auto& o = st.gates[kLstmOutput];
  const auto& g = st.gates[kLstmCell];
  std::vector<double> da_i(h), da_f(h), da_o(h), da_g(h);
  for (size_t k = 0; k < h; ++k) {
    const double dct = dc[k] + dh[k] * o[k] * (1.0 - st.tanh_c[k] * st.tanh_c[k]);
    da_o[k] = dh[k] * st.tanh_c[k] * o[k] * (1.0 - o[k]);
    da_i[k] = dct * g[k] * i[k] * (1.0 - i[k]);
    da_f[k] = dct * st.c_prev[k] * f[k] * (1.0 - f[k]);
    da_g[k] = dct * i[k] * (1.0 - g[k] * g[k]);
    dc_prev[k] += dct * f[k];
  }
  GateBackward(params, cell.gates[kLstmInput], da_i, st.x, st.h_prev, dx, dh_prev);
  GateBackward(params, cell.gates[kLstmForget], da_f, st.x, st.h_prev, dx, dh_prev);
  GateBackward(params, cell.gates[kLstmOutput], da_o, st.x, st.h_prev, dx, dh_prev);
  GateBackward(params, cell.gates[kLstmCell], da_g, st.x, st.h_prev, dx, dh_prev);
}

// Runs one layer over inputs in processing order.
std::vector<std::vector<double>> LayerForward(const ParamStore& params, const CellParams& cell,
                                              const std::vector<std::vector<double>>& inputs,
                                              LayerTrace* trace) {
  std::vector<std::vector<double>> outputs;
  outputs.reserve(inputs.size());
  std::vector<double> h = Zeros(cell.hidden), c = Zeros(cell.hidden);
  for (const auto& x : inputs) {
    LayerTrace::Step st;
    st.x = x;
    st.h_prev = h;
    if (cell.kind == CellKind::kGru) {
      GruForward(params, cell, st);
    } else {
      st.c_prev = c;
      LstmForward(params, cell, st);
      c = st.c;
    }
    h = st.h;
    outputs.push_back(h);
    if (trace) trace->steps.push_back(std::move(st));
  }
  return outputs;
}

// d_outputs in processing order; returns d_inputs in processing order.
std::vector<std::vector<double>> LayerBackward(ParamStore& params, const CellParams& cell,
                                               const LayerTrace& trace,
                                               const std::vector<std::vector<double>>& d_outputs) {
  const size_t steps = trace.steps.size();
  std::vector<std::vector<double>> d_inputs(steps);
  std::vector<double> dh_next = Zeros(cell.hidden), dc_next = Zeros(cell.hidden);
  for (size_t t = steps; t-- > 0;) {
    const auto& st = trace.steps[t];
    std::vector<double> dh = d_outputs[t];
    for (int k = 0; k < cell.hidden; ++k) dh[k] += dh_next[k];
    std::vector<double> dx = Zeros(cell.input_dim), dh_prev = Zeros(cell.hidden);
    if (cell.kind == CellKind::kGru) {
      GruBackward(params, cell, st, dh, dx, dh_prev);
    } else {
      std::vector<double> dc_prev = Zeros(cell.hidden);
      LstmBackward(params, cell, st, dh, dc_next, dx, dh_prev, dc_prev);
      dc_next = std::move(dc_prev);
    }
    dh_next = std::move(dh_prev);
    d_inputs[t] = std::move(dx);
  }
  return d_inputs;
}

// The word table is only checked on the rows an example touched.
void CheckFiniteGrads(const ParamStore& params, size_t word_param,
                      const std::array<std::vector<int>, 3>& ids) {
  for (size_t i = 0; i < params.size(); ++i) {
    const Tensor& t = params.at(i);
    if (i == word_param) {
      for (const auto& branch : ids) {
        for (int id : branch) {
          std::span<const double> row(t.grad.data() + id * t.cols(), t.cols());
          if (!AllFinite(row)) throw NumericError("non-finite gradient in tensor " + t.name);
        }
      }
    } else if (!AllFinite(t.grad)) {
      throw NumericError("non-finite gradient in tensor " + t.name);
    }
  }
}

}  // namespace

std::string_view CellKindName(CellKind kind) { return kind == CellKind::kGru ? "gru" : "lstm"; }

CellKind ParseCellKind(std::string_view name) {
  if (name == "gru") return CellKind::kGru;
  if (name == "lstm") return CellKind::kLstm;
  throw ConfigError("unknown cell '" + std::string(name) + "' (expected gru|lstm)");
}

std::string_view HeadModeName(HeadMode mode) {
  return mode == HeadMode::kSoftmax ? "softmax" : "sigmoid";
}

HeadMode ParseHeadMode(std::string_view name) {
  if (name == "softmax") return HeadMode::kSoftmax;
  if (name == "sigmoid") return HeadMode::kSigmoid;
  throw ConfigError("unknown head '" + std::string(name) + "' (expected softmax|sigmoid)");
}

void ModelConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid model config: " + what);
  };
  require(word_dim >= 1, "word_dim must be >= 1");
  require(!use_branch || branch_dim >= 1, "branch_dim must be >= 1");
  require(hidden >= 1, "hidden must be >= 1");
  require(layers >= 1, "layers must be >= 1");
  require(head_layers >= 0, "head_layers must be >= 0");
  require(head_layers == 0 || head_hidden >= 1, "head_hidden must be >= 1");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  require(num_classes >= 2, "need at least one event type");
}

CellParams AddCellParams(ParamStore& params, const std::string& prefix, CellKind kind,
                         int input_dim, int hidden, Rng& rng) {
  CellParams cell{kind, input_dim, hidden, {}};
  const size_t h = static_cast<size_t>(hidden), d = static_cast<size_t>(input_dim);
  const size_t n_gates = kind == CellKind::kGru ? 3 : 4;
  for (size_t g = 0; g < n_gates; ++g) {
    const std::string gname = kind == CellKind::kGru ? kGruGateNames[g] : kLstmGateNames[g];
    Gate gate;
    gate.w = params.Add(InitUniformScaled(prefix + ".W_" + gname, {h, d}, rng));
    gate.u = params.Add(InitUniformScaled(prefix + ".U_" + gname, {h, h}, rng));
    gate.b = params.Add(Tensor(prefix + ".b_" + gname, {h}));
    cell.gates.push_back(gate);
  }
  return cell;
}

std::vector<double> GruStep(const ParamStore& params, const CellParams& cell,
                            std::span<const double> x, std::span<const double> h_prev) {
  LayerTrace::Step st;
  st.x.assign(x.begin(), x.end());
  st.h_prev.assign(h_prev.begin(), h_prev.end());
  GruForward(params, cell, st);
  return st.h;
}

LstmState LstmStep(const ParamStore& params, const CellParams& cell, std::span<const double> x,
                   std::span<const double> h_prev, std::span<const double> c_prev) {
  if (c_prev.size() != h_prev.size()) throw ConfigError("lstm step: c/h size mismatch");
  LayerTrace::Step st;
  st.x.assign(x.begin(), x.end());
  st.h_prev.assign(h_prev.begin(), h_prev.end());
  st.c_prev.assign(c_prev.begin(), c_prev.end());
  LstmForward(params, cell, st);
  return {st.h, st.c};
}

std::vector<double> EncodeBranch(const ParamStore& params, const BranchEncoder& encoder,
                                 const std::vector<std::vector<double>>& inputs,
                                 EncoderTrace* trace) {
  std::vector<std::vector<double>> seq = inputs;
  if (encoder.direction == Direction::kBackward) std::reverse(seq.begin(), seq.end());
  if (trace) {
    trace->layers.assign(encoder.layers.size(), {});
  }
  for (size_t l = 0; l < encoder.layers.size(); ++l) {
    seq = LayerForward(params, encoder.layers[l], seq, trace ? &trace->layers[l] : nullptr);
  }
  std::vector<double> out = seq.empty() ? Zeros(encoder.hidden()) : seq.back();
  if (trace) trace->output = out;
  return out;
}

std::vector<std::vector<double>> EncodeBranchBackward(ParamStore& params,
                                                      const BranchEncoder& encoder,
                                                      const EncoderTrace& trace,
                                                      std::span<const double> d_output) {
  if (trace.layers.empty() || trace.layers.back().steps.empty()) return {};
  const size_t steps = trace.layers.back().steps.size();
  std::vector<std::vector<double>> d_seq(steps, Zeros(encoder.hidden()));
  d_seq.back().assign(d_output.begin(), d_output.end());
  for (size_t l = encoder.layers.size(); l-- > 0;) {
    d_seq = LayerBackward(params, encoder.layers[l], trace.layers[l], d_seq);
  }
  if (encoder.direction == Direction::kBackward) std::reverse(d_seq.begin(), d_seq.end());
  return d_seq;
}

std::vector<double> Classify(const ParamStore& params, const Head& head,
                             std::span<const double> left, std::span<const double> nugget,
                             std::span<const double> right, Mode mode, Rng& rng,
                             HeadTrace* trace) {
  std::vector<double> a;
  a.reserve(left.size() + nugget.size() + right.size());
  a.insert(a.end(), left.begin(), left.end());
  a.insert(a.end(), nugget.begin(), nugget.end());
  a.insert(a.end(), right.begin(), right.end());
  std::vector<double> mask = DropoutMask(a.size(), head.dropout, rng, mode);
  for (size_t k = 0; k < a.size(); ++k) a[k] *= mask[k];

  HeadTrace local;
  HeadTrace& tr = trace ? *trace : local;
  tr.mask = std::move(mask);
  tr.activations.clear();
  tr.activations.push_back(a);
  for (const auto& layer : head.hidden) {
    std::vector<double> z = params.at(layer.b).values;
    MatVecAdd(params.at(layer.w), tr.activations.back(), z);
    tr.activations.push_back(Tanh(z));
  }
  tr.logits = params.at(head.out.b).values;
  MatVecAdd(params.at(head.out.w), tr.activations.back(), tr.logits);
  tr.probs = head.mode == HeadMode::kSoftmax ? Softmax(tr.logits) : Sigmoid(tr.logits);
  return tr.probs;
}

double SoftmaxLoss(std::span<const double> probs, int gold_class) {
  if (gold_class < 0 || gold_class >= static_cast<int>(probs.size())) {
    throw ConfigError("gold class out of range: " + std::to_string(gold_class));
  }
  return -std::log(std::max(probs[gold_class], kLogClamp));
}

double SigmoidLoss(std::span<const double> probs, const std::vector<int>& gold_types) {
  std::vector<double> target(probs.size(), 0.0);
  for (int t : gold_types) {
    if (t < 1 || t > static_cast<int>(probs.size())) {
      throw ConfigError("gold type out of range: " + std::to_string(t));
    }
    target[t - 1] = 1.0;
  }
  double loss = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    loss -= target[k] > 0.0 ? std::log(std::max(p, kLogClamp))
                            : std::log(std::max(1.0 - p, kLogClamp));
  }
  return loss;
}

int SoftmaxTarget(const std::vector<int>& gold_types) {
  return gold_types.empty() ? LabelSet::kNonEvent
                            : *std::min_element(gold_types.begin(), gold_types.end());
}

std::vector<int> DecideTypes(std::span<const double> dist, HeadMode mode, double threshold) {
  if (mode == HeadMode::kSoftmax) {
    const int best = static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    if (best == LabelSet::kNonEvent) return {};
    return {best};
  }
  std::vector<int> types;
  for (size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] > threshold) types.push_back(static_cast<int>(k) + 1);
  }
  return types;
}

Fbrnn::Fbrnn(const ModelConfig& config, Vocabulary vocab, Rng& rng) : config_(config) {
  config_.Validate();
  Build(RandomWordTable(std::move(vocab), config_.word_dim, rng), rng);
}

Fbrnn::Fbrnn(const ModelConfig& config, WordTable words, Rng& rng) : config_(config) {
  config_.Validate();
  if (words.dim() != config_.word_dim) {
    throw ConfigError("word table dimension " + std::to_string(words.dim()) +
                      " does not match word_dim " + std::to_string(config_.word_dim));
  }
  Build(std::move(words), rng);
}

void Fbrnn::Build(WordTable words, Rng& rng) {
  vocab_ = std::move(words.vocab);
  words.matrix.name = kWordTableName;
  const size_t word_param = params_.Add(std::move(words.matrix));
  std::optional<size_t> branch_param;
  if (config_.use_branch) branch_param = params_.Add(MakeBranchTable(config_.branch_dim, rng));
  input_ = InputLayer(word_param, branch_param, config_.word_dim, config_.branch_dim);

  for (Branch b : {Branch::kLeft, Branch::kNugget, Branch::kRight}) {
    BranchEncoder& enc = encoders_[static_cast<int>(b)];
    enc.branch = b;
    enc.direction = b == Branch::kRight ? Direction::kBackward : Direction::kForward;
    int in_dim = config_.InputWidth();
    for (int l = 0; l < config_.layers; ++l) {
      const std::string prefix =
          "enc." + std::string(BranchName(b)) + ".l" + std::to_string(l);
      enc.layers.push_back(AddCellParams(params_, prefix, config_.cell, in_dim, config_.hidden, rng));
      in_dim = config_.hidden;
    }
  }

  head_.mode = config_.head;
  head_.dropout = config_.dropout;
  size_t in_dim = 3 * static_cast<size_t>(config_.hidden);
  for (int l = 0; l < config_.head_layers; ++l) {
    const std::string prefix = "head.fc" + std::to_string(l);
    const size_t out_dim = static_cast<size_t>(config_.head_hidden);
    Dense d;
    d.w = params_.Add(InitUniformScaled(prefix + ".W", {out_dim, in_dim}, rng));
    d.b = params_.Add(Tensor(prefix + ".b", {out_dim}));
    head_.hidden.push_back(d);
    in_dim = out_dim;
  }
  const size_t k = static_cast<size_t>(config_.OutputWidth());
  head_.out.w = params_.Add(InitUniformScaled("head.out.W", {k, in_dim}, rng));
  head_.out.b = params_.Add(Tensor("head.out.b", {k}));
}

EncodedExample Fbrnn::Encode(const Sentence& s, const NuggetCandidate& c) const {
  const BranchSplit split = SplitBranches(s, c);
  EncodedExample ex;
  const std::array<std::span<const Token>, 3> parts = {split.left, split.nugget, split.right};
  for (int b = 0; b < 3; ++b) {
    for (const auto& t : parts[b]) ex.ids[b].push_back(vocab_.Lookup(t.text));
  }
  return ex;
}

std::vector<std::vector<double>> Fbrnn::BranchInputs(Branch b, const std::vector<int>& ids) const {
  std::vector<std::vector<double>> inputs;
  inputs.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || static_cast<size_t>(id) >= vocab_.size()) {
      throw ConfigError("word id out of range: " + std::to_string(id));
    }
    inputs.push_back(input_.Assemble(params_, id, b));
  }
  return inputs;
}

std::vector<double> Fbrnn::Distribution(const EncodedExample& ex, Mode mode, Rng& rng) const {
  std::array<std::vector<double>, 3> reps;
  for (int b = 0; b < 3; ++b) {
    reps[b] = EncodeBranch(params_, encoders_[b], BranchInputs(static_cast<Branch>(b), ex.ids[b]));
  }
  return Classify(params_, head_, reps[0], reps[1], reps[2], mode, rng);
}

std::vector<double> Fbrnn::Distribution(const EncodedExample& ex) const {
  Rng unused(0);
  return Distribution(ex, Mode::kEval, unused);
}

double Fbrnn::Loss(const EncodedExample& ex, const std::vector<int>& gold_types, Mode mode,
                   Rng& rng) const {
  const auto dist = Distribution(ex, mode, rng);
  return config_.head == HeadMode::kSoftmax ? SoftmaxLoss(dist, SoftmaxTarget(gold_types))
                                            : SigmoidLoss(dist, gold_types);
}

double Fbrnn::ForwardBackward(const EncodedExample& ex, const std::vector<int>& gold_types,
                              Mode mode, Rng& rng) {
  std::array<EncoderTrace, 3> traces;
  std::array<std::vector<double>, 3> reps;
  for (int b = 0; b < 3; ++b) {
    reps[b] = EncodeBranch(params_, encoders_[b], BranchInputs(static_cast<Branch>(b), ex.ids[b]),
                           &traces[b]);
  }
  HeadTrace ht;
  const auto probs = Classify(params_, head_, reps[0], reps[1], reps[2], mode, rng, &ht);

  // d(loss)/d(logits) is p - y for both heads.
  std::vector<double> d = probs;
  double loss = 0.0;
  if (config_.head == HeadMode::kSoftmax) {
    const int gold = SoftmaxTarget(gold_types);
    loss = SoftmaxLoss(probs, gold);
    d[gold] -= 1.0;
  } else {
    loss = SigmoidLoss(probs, gold_types);
    for (int t : gold_types) d[t - 1] -= 1.0;
  }
  if (!std::isfinite(loss)) {
    for (const auto& t : params_) {
      if (!AllFinite(t.values)) {
        throw NumericError("non-finite loss: tensor " + t.name + " holds non-finite values");
      }
    }
    throw NumericError("non-finite loss with finite parameters");
  }

  AccumulateOuter(params_.at(head_.out.w), d, ht.activations.back());
  AccumulateBias(params_.at(head_.out.b), d);
  std::vector<double> da = Zeros(ht.activations.back().size());
  MatTVecAdd(params_.at(head_.out.w), d, da);
  for (size_t l = head_.hidden.size(); l-- > 0;) {
    const auto& act = ht.activations[l + 1];
    std::vector<double> dz(act.size());
    for (size_t k = 0; k < act.size(); ++k) dz[k] = da[k] * (1.0 - act[k] * act[k]);
    const Dense& layer = head_.hidden[l];
    AccumulateOuter(params_.at(layer.w), dz, ht.activations[l]);
    AccumulateBias(params_.at(layer.b), dz);
    da = Zeros(ht.activations[l].size());
    MatTVecAdd(params_.at(layer.w), dz, da);
  }
  for (size_t k = 0; k < da.size(); ++k) da[k] *= ht.mask[k];

  const size_t h = static_cast<size_t>(config_.hidden);
  for (int b = 0; b < 3; ++b) {
    std::span<const double> d_rep(da.data() + b * h, h);
    const auto d_inputs = EncodeBranchBackward(params_, encoders_[b], traces[b], d_rep);
    for (size_t t = 0; t < d_inputs.size(); ++t) {
      input_.Backward(params_, ex.ids[b][t], static_cast<Branch>(b), d_inputs[t]);
    }
  }
  CheckFiniteGrads(params_, *params_.Find(kWordTableName), ex.ids);
  return loss;
}

std::vector<int> Fbrnn::Predict(const EncodedExample& ex, double threshold) const {
  return DecideTypes(Distribution(ex), config_.head, threshold);
}

GradCheckResult GradCheckTinyModel(const TinyGradCheckOptions& options) {
  Rng rng(options.seed);
  Vocabulary vocab;
  for (int w = 0; w < 10; ++w) vocab.Add("w" + std::to_string(w));

  Sentence s;
  for (int i = 0; i < 6; ++i) {
    s.tokens.push_back({"w" + std::to_string(rng.Below(12)), "NN"});  // ids >= 10 hit UNK
  }
  NuggetCandidate c;
  c.start = 1 + static_cast<int>(rng.Below(3));
  c.end = c.start + static_cast<int>(rng.Below(2));
  std::vector<int> gold;
  for (int t = 1; t <= 3; ++t) {
    if (rng.Uniform() < 0.5) gold.push_back(t);
  }

  ModelConfig cfg;
  cfg.cell = options.cell;
  cfg.head = options.head;
  cfg.use_branch = options.use_branch;
  cfg.layers = options.layers;
  cfg.word_dim = 5;
  cfg.branch_dim = 2;
  cfg.hidden = 4;
  cfg.head_hidden = 3;
  cfg.head_layers = 1;
  cfg.num_classes = 4;
  Fbrnn model(cfg, std::move(vocab), rng);
  // Non-zero biases so every bias path is exercised away from symmetry.
  for (auto& t : model.params()) {
    if (t.shape.size() == 1) {
      for (double& v : t.values) v = rng.Uniform(-0.5, 0.5);
    }
  }
  const EncodedExample ex = model.Encode(s, c);
  return GradCheck(model.params(), [&](ParamStore&) {
    Rng unused(0);
    return model.ForwardBackward(ex, gold, Mode::kEval, unused);
  }, options.eps, options.floor);
}

}  // namespace fbrnn
