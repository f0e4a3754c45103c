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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

const std::string kBin = FBRNN_BIN;
const fs::path kData = fs::path(FBRNN_DATA) / "synthetic";

struct Result {
  int code = -1;
  std::string output;
};

Result Cli(const std::string& args) {
  Result r;
  const std::string cmd = kBin + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path Fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fbrnn_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string DataArgs() {
  return "--train " + (kData / "train.jsonl").string() + " --dev " +
         (kData / "dev.jsonl").string() + " --labels " + (kData / "labels.json").string() +
         " --paraphrases " + (kData / "paraphrases.tsv").string();
}

const std::string kSmall =
    " --word-dim 12 --branch-dim 4 --hidden 10 --head-hidden 10 --max-epochs 3 --seed 5";

TEST(CliTest, HelpListsSubcommandsAndRequirements) {
  Result r = Cli("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"synth", "build-lexicon", "candidates", "train", "predict", "evaluate",
                          "gradcheck", "ablate"}) {
    EXPECT_NE(r.output.find(sub), std::string::npos) << sub;
  }
  r = Cli("train --help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("Requires: train, labels"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("--use-branch"), std::string::npos);
}

TEST(CliTest, GradcheckPasses) {
  const fs::path dir = Fresh("gradcheck");
  const Result r = Cli("gradcheck --cell gru --seed 7 --run-dir " + dir.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("max rel err"), std::string::npos);
  EXPECT_NE(r.output.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "gradcheck.json"));
  EXPECT_EQ(Cli("gradcheck --cell lstm --head sigmoid --use-branch false --run-dir " +
                dir.string())
                .code,
            0);
}

TEST(CliTest, EvaluateGoldAgainstItself) {
  const fs::path dir = Fresh("eval_gold");
  const std::string dev = (kData / "dev.jsonl").string();
  const Result r = Cli("evaluate --gold " + dev + " --predictions " + dev + " --labels " +
                       (kData / "labels.json").string() + " --run-dir " + dir.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("P=100.0"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("R=100.0"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("F1=100.0"), std::string::npos) << r.output;
  EXPECT_NE(Slurp(dir / "report.json").find("\"f1\": 1.0"), std::string::npos);
}

TEST(CliTest, TrainTwiceGivesIdenticalLogs) {
  const fs::path conf = fs::temp_directory_path() / "fbrnn_cli_determinism.conf";
  std::ofstream(conf) << "word_dim = 12\nbranch_dim = 4\nhidden = 10\nhead_hidden = 10\n"
                         "max_epochs = 3\nseed = 11\n";
  const fs::path a = Fresh("det_a"), b = Fresh("det_b");
  const std::string base = "train --config " + conf.string() + " " + DataArgs();
  const Result ra = Cli(base + " --run-dir " + a.string());
  const Result rb = Cli(base + " --run-dir " + b.string());
  ASSERT_EQ(ra.code, 0) << ra.output;
  ASSERT_EQ(rb.code, 0) << rb.output;
  const std::string log = Slurp(a / "train_log.csv");
  EXPECT_EQ(log.rfind("epoch,loss,dev_p,dev_r,dev_f1,seconds\n", 0), 0u);
  EXPECT_EQ(log, Slurp(b / "train_log.csv"));
  EXPECT_EQ(Slurp(a / "checkpoint.json"), Slurp(b / "checkpoint.json"));
  for (const char* f : {"checkpoint.json", "lexicon.tsv", "config.txt", "dev_report.json"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
  }
}

TEST(CliTest, PipelineEndToEnd) {
  const fs::path work = Fresh("pipeline");
  const std::string labels = " --labels " + (work / "data" / "labels.json").string();
  Result r = Cli("synth --seed 3 --sentences 80 --run-dir " + (work / "data").string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"train.jsonl", "dev.jsonl", "labels.json", "paraphrases.tsv"}) {
    EXPECT_TRUE(fs::exists(work / "data" / f)) << f;
  }
  const std::string train = (work / "data" / "train.jsonl").string();
  const std::string dev = (work / "data" / "dev.jsonl").string();

  r = Cli("build-lexicon --train " + train + labels + " --paraphrases " +
          (work / "data" / "paraphrases.tsv").string() + " --run-dir " + (work / "lex").string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string lexicon = (work / "lex" / "lexicon.tsv").string();
  EXPECT_NE(Slurp(lexicon).find("broke\t"), std::string::npos);

  r = Cli("candidates --corpus " + dev + labels + " --lexicon " + lexicon + " --run-dir " +
          (work / "cands").string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(Slurp(work / "cands" / "candidates.jsonl").find("\"label\""), std::string::npos);

  r = Cli("train --train " + train + " --dev " + dev + labels + kSmall + " --run-dir " +
          (work / "model").string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string ckpt = (work / "model" / "checkpoint.json").string();

  r = Cli("predict --checkpoint " + ckpt + " --corpus " + dev + " --run-dir " +
          (work / "pred").string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string pred = (work / "pred" / "predictions.jsonl").string();
  EXPECT_TRUE(fs::exists(pred));

  const Result direct = Cli("evaluate --gold " + dev + " --checkpoint " + ckpt + " --run-dir " +
                            (work / "ev1").string());
  const Result via_file = Cli("evaluate --gold " + dev + " --predictions " + pred +
                              " --checkpoint " + ckpt + " --run-dir " + (work / "ev2").string());
  ASSERT_EQ(direct.code, 0) << direct.output;
  ASSERT_EQ(via_file.code, 0) << via_file.output;
  EXPECT_EQ(direct.output, via_file.output);
  EXPECT_EQ(Slurp(work / "ev1" / "report.json"), Slurp(work / "ev2" / "report.json"));
}

TEST(CliTest, AblateEmitsFourRows) {
  const fs::path dir = Fresh("ablate");
  const fs::path pos = fs::path(FBRNN_DATA) / "positional";
  const Result r = Cli("ablate --train " + (pos / "train.jsonl").string() + " --dev " +
                       (pos / "dev.jsonl").string() + " --labels " +
                       (pos / "labels.json").string() +
                       " --word-dim 8 --branch-dim 4 --hidden 8 --head-hidden 8"
                       " --max-epochs 2 --run-dir " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* row : {"| LSTM | +branch", "| LSTM | -branch", "| GRU  | +branch",
                          "| GRU  | -branch"}) {
    EXPECT_NE(r.output.find(row), std::string::npos) << row;
  }
  EXPECT_TRUE(fs::exists(dir / "ablation.json"));
  EXPECT_TRUE(fs::exists(dir / "ablation.txt"));
}

TEST(CliTest, UsageAndConfigErrorsExitOne) {
  EXPECT_EQ(Cli("").code, 1);
  EXPECT_EQ(Cli("frobnicate").code, 1);
  EXPECT_EQ(Cli("train --no-such-flag 1").code, 1);
  EXPECT_EQ(Cli("train --hidden abc " + DataArgs()).code, 1);
  Result r = Cli("train --train /nonexistent/train.jsonl --labels ace");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("/nonexistent/train.jsonl"), std::string::npos) << r.output;
  const fs::path conf = fs::temp_directory_path() / "fbrnn_cli_bad.conf";
  std::ofstream(conf) << "hidden = 4\nfavourite_colour = blue\n";
  r = Cli("train --config " + conf.string() + " " + DataArgs());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find(":2"), std::string::npos) << r.output;
}

TEST(CliTest, DataErrorsExitTwoAndWriteNothing) {
  const fs::path bad = fs::temp_directory_path() / "fbrnn_cli_bad.jsonl";
  std::ofstream(bad) << R"({"tokens":[{"t":"a"}],"nuggets":[]})" << "\n"
                     << R"({"tokens":[{"t":"a"}],"nuggets":[{"start":0,"end":4,"types":["Life.Die"]}]})"
                     << "\n";
  const fs::path dir = Fresh("data_error");
  const Result r = Cli("train --train " + bad.string() + " --labels " +
                       (kData / "labels.json").string() + " --run-dir " + dir.string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("fbrnn_cli_bad.jsonl:2"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir));
}

TEST(CliTest, NumericFailureExitsThree) {
  const fs::path dir = Fresh("nan");
  const Result r = Cli("train " + DataArgs() + kSmall +
                       " --optimizer sgd --sgd-lr 1e300 --clip-norm 0 --run-dir " + dir.string());
  EXPECT_EQ(r.code, 3) << r.output;
  EXPECT_NE(r.output.find("epoch 1"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir));
}

TEST(CliTest, TruncatedCheckpointIsDataError) {
  const fs::path dir = Fresh("guard");
  ASSERT_EQ(Cli("train " + DataArgs() + " --word-dim 8 --hidden 8 --head-hidden 8 --max-epochs 1 --run-dir " + dir.string()).code,
            0);
  const std::string full = Slurp(dir / "checkpoint.json");
  std::ofstream(dir / "cut.json") << full.substr(0, full.size() / 2);
  const Result r = Cli("predict --checkpoint " + (dir / "cut.json").string() + " --corpus " +
                       (kData / "dev.jsonl").string() + " --run-dir " + (dir / "p").string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_FALSE(fs::exists(dir / "p"));
}

TEST(CliTest, DefaultRunDirectoryUsesConfigHash) {
  const fs::path out = Fresh("outdir");
  const Result r = Cli("gradcheck --output-dir " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  size_t dirs = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    ++dirs;
    EXPECT_EQ(entry.path().filename().string().size(), 8u + 1 + 16);
    EXPECT_TRUE(fs::exists(entry.path() / "gradcheck.json"));
  }
  EXPECT_EQ(dirs, 1u);
}

}  // namespace
