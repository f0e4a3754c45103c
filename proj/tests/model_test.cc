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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fbrnn/candidates.h"
#include "fbrnn/embeddings.h"
#include "fbrnn/errors.h"
#include "fbrnn/model.h"
#include "gtest/gtest.h"

namespace fbrnn {
namespace {

using Vec = std::vector<double>;

Vec RandomVec(size_t n, Rng& rng, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.Uniform(-scale, scale);
  return v;
}

void FillAll(ParamStore& params, double value) {
  for (auto& t : params) std::fill(t.values.begin(), t.values.end(), value);
}

void Randomize(ParamStore& params, Rng& rng) {
  for (auto& t : params) {
    for (double& v : t.values) v = rng.Uniform(-0.8, 0.8);
  }
}

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Plain loops over raw values, no kernel calls.
double Affine(const ParamStore& p, const Gate& g, size_t i, const Vec& x, const Vec& h) {
  const Tensor& w = p.at(g.w);
  const Tensor& u = p.at(g.u);
  double a = p.at(g.b).values[i];
  for (size_t j = 0; j < x.size(); ++j) a += w.values[i * x.size() + j] * x[j];
  for (size_t j = 0; j < h.size(); ++j) a += u.values[i * h.size() + j] * h[j];
  return a;
}

Vec ScalarGru(const ParamStore& p, const CellParams& c, const Vec& x, const Vec& h) {
  const size_t n = h.size();
  Vec z(n), r(n), rh(n), out(n);
  for (size_t i = 0; i < n; ++i) {
    z[i] = Sig(Affine(p, c.gates[kGruUpdate], i, x, h));
    r[i] = Sig(Affine(p, c.gates[kGruReset], i, x, h));
    rh[i] = r[i] * h[i];
  }
  for (size_t i = 0; i < n; ++i) {
    const double cand = std::tanh(Affine(p, c.gates[kGruCandidate], i, x, rh));
    out[i] = (1 - z[i]) * h[i] + z[i] * cand;
  }
  return out;
}

LstmState ScalarLstm(const ParamStore& p, const CellParams& c, const Vec& x, const Vec& h,
                     const Vec& cprev) {
  const size_t n = h.size();
  LstmState s{Vec(n), Vec(n)};
  for (size_t i = 0; i < n; ++i) {
    const double ig = Sig(Affine(p, c.gates[kLstmInput], i, x, h));
    const double fg = Sig(Affine(p, c.gates[kLstmForget], i, x, h));
    const double og = Sig(Affine(p, c.gates[kLstmOutput], i, x, h));
    const double g = std::tanh(Affine(p, c.gates[kLstmCell], i, x, h));
    s.c[i] = fg * cprev[i] + ig * g;
    s.h[i] = og * std::tanh(s.c[i]);
  }
  return s;
}

TEST(CellTest, ParameterNamesAndShapes) {
  ParamStore p;
  Rng rng(1);
  const CellParams gru = AddCellParams(p, "enc.left.l0", CellKind::kGru, 5, 4, rng);
  EXPECT_EQ(gru.gates.size(), 3u);
  EXPECT_EQ(p.at(gru.gates[0].w).name, "enc.left.l0.W_z");
  EXPECT_EQ(p.at(gru.gates[1].u).name, "enc.left.l0.U_r");
  EXPECT_EQ(p.at(gru.gates[2].b).name, "enc.left.l0.b_h");
  EXPECT_EQ(p.at(gru.gates[0].w).shape, (std::vector<size_t>{4, 5}));
  EXPECT_EQ(p.at(gru.gates[0].u).shape, (std::vector<size_t>{4, 4}));
  EXPECT_EQ(p.at(gru.gates[0].b).shape, (std::vector<size_t>{4}));
  const CellParams lstm = AddCellParams(p, "x", CellKind::kLstm, 3, 2, rng);
  EXPECT_EQ(lstm.gates.size(), 4u);
  EXPECT_EQ(p.at(lstm.gates[kLstmForget].w).name, "x.W_f");
  EXPECT_EQ(p.at(lstm.gates[kLstmCell].b).name, "x.b_g");
}

TEST(CellTest, ZeroWeightGruHalvesState) {
  ParamStore p;
  Rng rng(1);
  const CellParams c = AddCellParams(p, "g", CellKind::kGru, 3, 4, rng);
  FillAll(p, 0.0);
  const Vec h = RandomVec(4, rng, 3.0);
  const Vec out = GruStep(p, c, RandomVec(3, rng), h);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(out[i], 0.5 * h[i], 1e-12);
  for (double v : GruStep(p, c, RandomVec(3, rng), Vec(4, 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(CellTest, ZeroWeightLstmClosedForm) {
  ParamStore p;
  Rng rng(1);
  const CellParams c = AddCellParams(p, "l", CellKind::kLstm, 3, 4, rng);
  FillAll(p, 0.0);
  const Vec cprev = RandomVec(4, rng, 3.0);
  const LstmState s = LstmStep(p, c, RandomVec(3, rng), RandomVec(4, rng), cprev);
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.c[i], 0.5 * cprev[i], 1e-12);
    EXPECT_NEAR(s.h[i], 0.5 * std::tanh(0.5 * cprev[i]), 1e-12);
  }
  const LstmState z = LstmStep(p, c, RandomVec(3, rng), RandomVec(4, rng), Vec(4, 0.0));
  for (double v : z.h) EXPECT_EQ(v, 0.0);
}

TEST(CellTest, GruMatchesScalarOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ParamStore p;
    const CellParams c = AddCellParams(p, "g", CellKind::kGru, 3, 4, rng);
    Randomize(p, rng);
    const Vec x = RandomVec(3, rng), h = RandomVec(4, rng);
    const Vec got = GruStep(p, c, x, h), want = ScalarGru(p, c, x, h);
    for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i], want[i], 1e-14);
  }
}

TEST(CellTest, LstmMatchesScalarOracle) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    ParamStore p;
    const CellParams c = AddCellParams(p, "l", CellKind::kLstm, 3, 4, rng);
    Randomize(p, rng);
    const Vec x = RandomVec(3, rng), h = RandomVec(4, rng), cp = RandomVec(4, rng);
    const LstmState got = LstmStep(p, c, x, h, cp), want = ScalarLstm(p, c, x, h, cp);
    for (size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(got.h[i], want.h[i], 1e-14);
      EXPECT_NEAR(got.c[i], want.c[i], 1e-14);
    }
  }
}

TEST(CellTest, ShapeMismatchIsConfigError) {
  ParamStore p;
  Rng rng(1);
  const CellParams c = AddCellParams(p, "g", CellKind::kGru, 3, 4, rng);
  EXPECT_THROW(GruStep(p, c, Vec(2), Vec(4)), ConfigError);
  EXPECT_THROW(GruStep(p, c, Vec(3), Vec(5)), ConfigError);
}

BranchEncoder MakeEncoder(ParamStore& p, CellKind kind, Direction dir, int layers, int in,
                          int h, Rng& rng) {
  BranchEncoder enc;
  enc.direction = dir;
  for (int l = 0; l < layers; ++l) {
    enc.layers.push_back(
        AddCellParams(p, "e" + std::to_string(l), kind, l == 0 ? in : h, h, rng));
  }
  return enc;
}

TEST(EncoderTest, EmptyBranchIsZero) {
  ParamStore p;
  Rng rng(1);
  const BranchEncoder enc = MakeEncoder(p, CellKind::kLstm, Direction::kForward, 2, 3, 4, rng);
  Randomize(p, rng);
  EXPECT_EQ(EncodeBranch(p, enc, {}), Vec(4, 0.0));
}

TEST(EncoderTest, SingleTokenIsOneStep) {
  ParamStore p;
  Rng rng(1);
  const BranchEncoder enc = MakeEncoder(p, CellKind::kGru, Direction::kBackward, 1, 3, 4, rng);
  Randomize(p, rng);
  const Vec x = RandomVec(3, rng);
  EXPECT_EQ(EncodeBranch(p, enc, {x}), GruStep(p, enc.layers[0], x, Vec(4, 0.0)));
}

TEST(EncoderTest, BackwardEqualsForwardOfReversed) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    ParamStore p;
    const CellKind kind = trial % 2 ? CellKind::kLstm : CellKind::kGru;
    const int layers = 1 + trial % 3;
    BranchEncoder fwd = MakeEncoder(p, kind, Direction::kForward, layers, 3, 4, rng);
    Randomize(p, rng);
    BranchEncoder bwd = fwd;
    bwd.direction = Direction::kBackward;
    std::vector<Vec> seq(1 + rng.Below(8));
    for (auto& x : seq) x = RandomVec(3, rng);
    std::vector<Vec> rev(seq.rbegin(), seq.rend());
    const Vec a = EncodeBranch(p, bwd, seq), b = EncodeBranch(p, fwd, rev);
    for (size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-12);
  }
}

ModelConfig TinyConfig(CellKind cell, HeadMode head, int classes = 4) {
  ModelConfig cfg;
  cfg.cell = cell;
  cfg.head = head;
  cfg.word_dim = 5;
  cfg.branch_dim = 2;
  cfg.hidden = 4;
  cfg.head_hidden = 3;
  cfg.num_classes = classes;
  return cfg;
}

Vocabulary Words(int n) {
  Vocabulary v;
  for (int i = 0; i < n; ++i) v.Add("w" + std::to_string(i));
  return v;
}

Sentence Words6() {
  Sentence s;
  for (int i = 0; i < 6; ++i) s.tokens.push_back({"w" + std::to_string(i), std::nullopt});
  return s;
}

TEST(FbrnnTest, ParameterLayout) {
  Rng rng(1);
  ModelConfig cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax);
  cfg.head_layers = 2;
  const Fbrnn m(cfg, Words(3), rng);
  const ParamStore& p = m.params();
  EXPECT_EQ(p.at(0).name, "embed.word");
  EXPECT_EQ(p.at(1).name, "embed.branch");
  EXPECT_TRUE(p.Find("enc.right.l0.U_h").has_value());
  EXPECT_EQ(p.at(*p.Find("head.fc0.W")).shape, (std::vector<size_t>{3, 12}));
  EXPECT_EQ(p.at(*p.Find("head.fc1.W")).shape, (std::vector<size_t>{3, 3}));
  EXPECT_EQ(p.at(*p.Find("head.out.W")).shape, (std::vector<size_t>{4, 3}));
  EXPECT_EQ(m.encoder(Branch::kLeft).direction, Direction::kForward);
  EXPECT_EQ(m.encoder(Branch::kNugget).direction, Direction::kForward);
  EXPECT_EQ(m.encoder(Branch::kRight).direction, Direction::kBackward);
  for (const auto& t : p) {
    if (t.name.find(".b_") != std::string::npos || t.name.ends_with(".b")) {
      for (double v : t.values) EXPECT_EQ(v, 0.0) << t.name;
    }
  }
}

TEST(FbrnnTest, AblationInputWidth) {
  Rng rng(1);
  ModelConfig cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax);
  cfg.use_branch = false;
  const Fbrnn m(cfg, Words(3), rng);
  EXPECT_FALSE(m.params().Find("embed.branch").has_value());
  EXPECT_EQ(m.input_layer().width(), 5);
  EXPECT_EQ(m.params().at(*m.params().Find("enc.left.l0.W_z")).shape,
            (std::vector<size_t>{4, 5}));
  EXPECT_EQ(m.Distribution(m.Encode(Words6(), {2, 3, {}})).size(), 4u);
}

TEST(FbrnnTest, ConfigValidation) {
  ModelConfig cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax);
  cfg.dropout = 1.0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax);
  cfg.hidden = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax, 1);
  EXPECT_THROW(cfg.Validate(), ConfigError);
  EXPECT_THROW(ParseCellKind("rnn"), ConfigError);
  EXPECT_EQ(ParseHeadMode("sigmoid"), HeadMode::kSigmoid);
}

TEST(HeadTest, ZeroWeightsGiveUniformSoftmax) {
  Rng rng(1);
  Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax, 34), Words(3), rng);
  for (auto& t : m.params()) {
    if (t.name.starts_with("head.")) std::fill(t.values.begin(), t.values.end(), 0.0);
  }
  Rng r(0);
  const Vec x = RandomVec(4, r);
  const Vec p = Classify(m.params(), m.head(), x, x, x, Mode::kEval, r);
  ASSERT_EQ(p.size(), 34u);
  for (double v : p) EXPECT_NEAR(v, 1.0 / 34, 1e-15);
  EXPECT_NEAR(SoftmaxLoss(p, 5), std::log(34.0), 1e-12);
  EXPECT_TRUE(DecideTypes(p, HeadMode::kSoftmax, 0.5).empty());
}

TEST(HeadTest, EvalIsDeterministic) {
  Rng rng(1);
  const Fbrnn m(TinyConfig(CellKind::kLstm, HeadMode::kSoftmax), Words(6), rng);
  const EncodedExample ex = m.Encode(Words6(), {2, 3, {}});
  Rng a(1), b(99);
  EXPECT_EQ(m.Distribution(ex, Mode::kEval, a), m.Distribution(ex, Mode::kEval, b));
}

TEST(HeadTest, TrainModeAppliesDropout) {
  Rng rng(1);
  ModelConfig cfg = TinyConfig(CellKind::kGru, HeadMode::kSoftmax);
  cfg.dropout = 0.5;
  const Fbrnn m(cfg, Words(6), rng);
  const EncodedExample ex = m.Encode(Words6(), {2, 3, {}});
  Rng a(1);
  bool differs = false;
  const Vec eval = m.Distribution(ex);
  for (int i = 0; i < 10 && !differs; ++i) differs = m.Distribution(ex, Mode::kTrain, a) != eval;
  EXPECT_TRUE(differs);
}

TEST(HeadTest, SigmoidMultiLabelThreshold) {
  Rng rng(1);
  Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSigmoid, 6), Words(3), rng);
  for (auto& t : m.params()) {
    if (t.name.starts_with("head.")) std::fill(t.values.begin(), t.values.end(), 0.0);
  }
  m.params().at(*m.params().Find("head.out.b")).values = {10, 10, -10, -10, -10};
  Rng r(0);
  const Vec x = RandomVec(4, r);
  const Vec p = Classify(m.params(), m.head(), x, x, x, Mode::kEval, r);
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(DecideTypes(p, HeadMode::kSigmoid, 0.5), (std::vector<int>{1, 2}));
  EXPECT_EQ(m.Predict(m.Encode(Words6(), {1, 1, {}})), (std::vector<int>{1, 2}));
}

TEST(LossTest, ClosedForms) {
  EXPECT_EQ(SoftmaxLoss(Vec{0.0, 1.0}, 1), 0.0);
  EXPECT_NEAR(SoftmaxLoss(Vec{1.0, 0.0}, 1), -std::log(kLogClamp), 1e-9);
  EXPECT_NEAR(SigmoidLoss(Vec(38, 0.5), {}), 38 * std::log(2.0), 1e-12);
  EXPECT_NEAR(SigmoidLoss(Vec(38, 0.5), {1, 5}), 38 * std::log(2.0), 1e-12);
  EXPECT_NEAR(SigmoidLoss(Vec{0.9, 0.2}, {1}), -std::log(0.9) - std::log(0.8), 1e-12);
  EXPECT_EQ(SoftmaxTarget({3, 7}), 3);
  EXPECT_EQ(SoftmaxTarget({}), 0);
}

TEST(DecideTest, TieBreaksAndThresholds) {
  EXPECT_TRUE(DecideTypes(Vec{0.25, 0.25, 0.25, 0.25}, HeadMode::kSoftmax, 0.5).empty());
  EXPECT_EQ(DecideTypes(Vec{0.2, 0.4, 0.4}, HeadMode::kSoftmax, 0.5), (std::vector<int>{1}));
  EXPECT_TRUE(DecideTypes(Vec{0.1, 0.49, 0.3}, HeadMode::kSigmoid, 0.5).empty());
  EXPECT_EQ(DecideTypes(Vec{0.9, 0.1, 0.7}, HeadMode::kSigmoid, 0.5), (std::vector<int>{1, 3}));
}

TEST(FbrnnTest, SoftmaxDistributionSumsToOne) {
  Rng rng(4);
  const Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax, 9), Words(6), rng);
  const Sentence s = Words6();
  for (int a = 0; a < 6; ++a) {
    for (int b = a; b < 6; ++b) {
      const Vec p = m.Distribution(m.Encode(s, {a, b, {}}));
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST(FbrnnTest, PredictionDependsOnlyOnOwnExample) {
  Rng rng(4);
  const Fbrnn m(TinyConfig(CellKind::kLstm, HeadMode::kSoftmax), Words(6), rng);
  const EncodedExample target = m.Encode(Words6(), {2, 2, {}});
  const Vec alone = m.Distribution(target);
  Sentence other;
  other.tokens = {{"w5", {}}, {"w1", {}}};
  m.Distribution(m.Encode(other, {0, 1, {}}));
  EXPECT_EQ(m.Distribution(target), alone);
}

TEST(FbrnnTest, EncodeSplitsIdsByBranch) {
  Rng rng(1);
  const Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax), Words(6), rng);
  Sentence s = Words6();
  s.tokens[5].text = "unseen";
  const EncodedExample ex = m.Encode(s, {2, 3, {}});
  EXPECT_EQ(ex.ids[0], (std::vector<int>{1, 2}));
  EXPECT_EQ(ex.ids[1], (std::vector<int>{3, 4}));
  EXPECT_EQ(ex.ids[2], (std::vector<int>{5, Vocabulary::kUnk}));
}

TEST(BackwardTest, EmptyBranchesGetNoGradient) {
  Rng rng(2);
  Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax), Words(6), rng);
  const EncodedExample ex = m.Encode(Words6(), {0, 5, {}});
  Rng d(0);
  m.ForwardBackward(ex, {2}, Mode::kEval, d);
  for (const auto& t : m.params()) {
    const bool empty_branch =
        t.name.starts_with("enc.left.") || t.name.starts_with("enc.right.");
    const bool any = std::any_of(t.grad.begin(), t.grad.end(), [](double g) { return g != 0; });
    if (empty_branch) {
      EXPECT_FALSE(any) << t.name;
    }
  }
  const auto& nugget_w = m.params().at(*m.params().Find("enc.nugget.l0.W_z"));
  EXPECT_TRUE(std::any_of(nugget_w.grad.begin(), nugget_w.grad.end(),
                          [](double g) { return g != 0; }));
}

TEST(BackwardTest, GradientsAccumulate) {
  Rng rng(2);
  Fbrnn m(TinyConfig(CellKind::kLstm, HeadMode::kSigmoid), Words(6), rng);
  const EncodedExample a = m.Encode(Words6(), {1, 2, {}});
  const EncodedExample b = m.Encode(Words6(), {4, 4, {}});
  Rng d(0);
  auto grads = [&]() {
    std::vector<Vec> out;
    for (const auto& t : m.params()) out.push_back(t.grad);
    return out;
  };
  m.params().ZeroGrad();
  m.ForwardBackward(a, {1}, Mode::kEval, d);
  const auto ga = grads();
  m.params().ZeroGrad();
  m.ForwardBackward(b, {}, Mode::kEval, d);
  const auto gb = grads();
  m.params().ZeroGrad();
  m.ForwardBackward(a, {1}, Mode::kEval, d);
  m.ForwardBackward(b, {}, Mode::kEval, d);
  const auto both = grads();
  for (size_t t = 0; t < both.size(); ++t) {
    for (size_t i = 0; i < both[t].size(); ++i) {
      EXPECT_NEAR(both[t][i], ga[t][i] + gb[t][i], 1e-14);
    }
  }
}

TEST(BackwardTest, LossMatchesForwardOnly) {
  Rng rng(3);
  Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax), Words(6), rng);
  const EncodedExample ex = m.Encode(Words6(), {1, 2, {}});
  Rng a(5), b(5);
  EXPECT_DOUBLE_EQ(m.ForwardBackward(ex, {3}, Mode::kTrain, a),
                   m.Loss(ex, {3}, Mode::kTrain, b));
}

TEST(BackwardTest, NonFiniteGradientNamesTensor) {
  Rng rng(3);
  Fbrnn m(TinyConfig(CellKind::kGru, HeadMode::kSoftmax), Words(6), rng);
  m.params().at(*m.params().Find("enc.nugget.l0.W_h")).values[0] = NAN;
  Rng d(0);
  try {
    m.ForwardBackward(m.Encode(Words6(), {1, 2, {}}), {3}, Mode::kEval, d);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("enc."), std::string::npos) << e.what();
  }
}

struct GradCase {
  CellKind cell;
  HeadMode head;
  bool use_branch;
  int layers;
};

class TinyGradCheckTest : public ::testing::TestWithParam<GradCase> {};

TinyGradCheckOptions Options(const GradCase& c, uint64_t seed, double floor) {
  TinyGradCheckOptions opt;
  opt.cell = c.cell;
  opt.head = c.head;
  opt.use_branch = c.use_branch;
  opt.layers = c.layers;
  opt.seed = seed;
  opt.floor = floor;
  return opt;
}

TEST_P(TinyGradCheckTest, DefaultSeedAndStep) {
  const GradCheckResult r = GradCheckTinyModel(Options(GetParam(), 7, 1e-8));
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst_tensor;
  EXPECT_GT(r.entries_checked, 100u);
}

// Across seeds some entries have |g| ~ 1e-10 and an absolute finite
// difference error ~ 1e-12 from cancellation, which the 1e-8 floor turns
// into a spurious 1e-3 relative error. Gradients above 1e-6 are judged
// exactly as with the default floor.
TEST_P(TinyGradCheckTest, SeedSweep) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const GradCheckResult r = GradCheckTinyModel(Options(GetParam(), seed, 1e-6));
    EXPECT_LT(r.max_rel_error, 1e-4) << "seed " << seed << " worst " << r.worst_tensor;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Configs, TinyGradCheckTest,
    ::testing::Values(GradCase{CellKind::kGru, HeadMode::kSoftmax, true, 1},
                      GradCase{CellKind::kGru, HeadMode::kSigmoid, true, 1},
                      GradCase{CellKind::kLstm, HeadMode::kSoftmax, true, 1},
                      GradCase{CellKind::kLstm, HeadMode::kSigmoid, true, 1},
                      GradCase{CellKind::kGru, HeadMode::kSoftmax, false, 1},
                      GradCase{CellKind::kLstm, HeadMode::kSigmoid, false, 1},
                      GradCase{CellKind::kGru, HeadMode::kSoftmax, true, 2},
                      GradCase{CellKind::kLstm, HeadMode::kSoftmax, true, 2}));

}  // namespace
}  // namespace fbrnn
