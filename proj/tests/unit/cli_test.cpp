// Copyright 2026 The dctts Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dctts/dsp/audio.hpp"
#include "dctts/train/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace dctts;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// One toy corpus and one pair of short-trained checkpoints shared by the suite.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "dctts_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(run({"toy-corpus", "--out", s(dir_ / "toy"), "--clips", "6"}).code, 0);
    ASSERT_EQ(run({"preprocess", "--metadata", s(dir_ / "toy" / "metadata.csv"), "--cache", s(dir_ / "cache"),
                   "--threads", "2"})
                  .code,
              0);
    std::ofstream(dir_ / "cfg.json")
        << R"({"batch_size": 3, "ssrn_crop": 16, "snapshot_every": 100, "hparams": {"embed": 16, "hidden": 32, "ssrn": 32}})";
    ASSERT_EQ(train("train-t2m", "t2m.ckpt", {"--max-iters", "6", "--seed", "11"}).code, 0);
    ASSERT_EQ(train("train-ssrn", "ssrn.ckpt", {"--max-iters", "3"}).code, 0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string s(const fs::path& p) { return p.string(); }
  static std::string path(const std::string& name) { return s(dir_ / name); }
  static Result train(const std::string& cmd, const std::string& out, std::vector<std::string> extra) {
    std::vector<std::string> args{cmd, "--config", path("cfg.json"), "--cache", path("cache"), "--out", path(out)};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  }

  static fs::path dir_;
};
fs::path CliTest::dir_;

}  // namespace

TEST_F(CliTest, PreprocessFillsCache) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "cache")) n += e.path().extension() == ".dcts";
  EXPECT_EQ(n, 6u);
}

TEST_F(CliTest, TrainingFlagsReachCheckpoint) {
  const auto meta = train::read_checkpoint_meta(dir_ / "t2m.ckpt");
  EXPECT_EQ(meta.kind, train::ModelKind::text2mel);
  EXPECT_EQ(meta.iteration, 6u);
  EXPECT_EQ(meta.seed, 11u);
  EXPECT_EQ(meta.hparams, net::HyperParams::reduced(16, 32, 32));
  EXPECT_EQ(train::read_checkpoint_meta(dir_ / "ssrn.ckpt").seed, 1u);
}

TEST_F(CliTest, ResumeKeepsCheckpointSeedAndHparams) {
  fs::copy_file(dir_ / "t2m.ckpt", dir_ / "resumed.ckpt", fs::copy_options::overwrite_existing);
  const auto r = run({"train-t2m", "--resume", path("resumed.ckpt"), "--cache", path("cache"), "--out",
                      path("resumed.ckpt"), "--max-iters", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto meta = train::read_checkpoint_meta(dir_ / "resumed.ckpt");
  EXPECT_EQ(meta.iteration, 8u);
  EXPECT_EQ(meta.seed, 11u);
  EXPECT_EQ(r.out.find("iter,"), std::string::npos);
  EXPECT_EQ(r.out.rfind("7,", 0), 0u);
}

TEST_F(CliTest, ResumeMatchesUninterruptedRun) {
  ASSERT_EQ(train("train-ssrn", "a.ckpt", {"--max-iters", "2"}).code, 0);
  ASSERT_EQ(run({"train-ssrn", "--config", path("cfg.json"), "--cache", path("cache"), "--resume", path("a.ckpt"),
                 "--out", path("a.ckpt"), "--max-iters", "4"})
                .code,
            0);
  ASSERT_EQ(train("train-ssrn", "b.ckpt", {"--max-iters", "4"}).code, 0);
  std::ifstream a(dir_ / "a.ckpt", std::ios::binary), b(dir_ / "b.ckpt", std::ios::binary);
  EXPECT_TRUE(std::equal(std::istreambuf_iterator<char>(a), {}, std::istreambuf_iterator<char>(b), {}));
}

TEST_F(CliTest, SynthWritesPlayableWav) {
  const auto r = run({"synth", "--text", "Hello!", "--t2m", path("t2m.ckpt"), "--ssrn", path("ssrn.ckpt"), "--out",
                      path("hello.wav"), "--max-frames", "12", "--attention", path("hello.pgm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto wave = dsp::read_wav(dir_ / "hello.wav");
  EXPECT_EQ(wave.sample_rate, 22050);
  EXPECT_GT(wave.samples.size(), 4u * 256);
  EXPECT_LE(wave.samples.size(), 4u * 12 * 256);
  EXPECT_TRUE(fs::exists(dir_ / "hello.pgm"));
}

TEST_F(CliTest, TextFileAndModesAgree) {
  std::ofstream(dir_ / "sentence.txt") << "ab cd";
  ASSERT_EQ(run({"plot-attention", "--text-file", path("sentence.txt"), "--t2m", path("t2m.ckpt"), "--out",
                 path("cached.pgm"), "--max-frames", "9"})
                .code,
            0);
  ASSERT_EQ(run({"plot-attention", "--text", "ab cd", "--t2m", path("t2m.ckpt"), "--out", path("naive.pgm"),
                 "--max-frames", "9", "--naive"})
                .code,
            0);
  std::ifstream a(dir_ / "cached.pgm", std::ios::binary), b(dir_ / "naive.pgm", std::ios::binary);
  const std::string pa{std::istreambuf_iterator<char>(a), {}}, pb{std::istreambuf_iterator<char>(b), {}};
  EXPECT_EQ(pa, pb);
  EXPECT_EQ(pa.rfind("P5\n9 5\n255\n", 0), 0u);
  EXPECT_EQ(pa.size(), std::string("P5\n9 5\n255\n").size() + 45);
}

TEST_F(CliTest, NoIncrementalAttentionFlagIsAccepted) {
  EXPECT_EQ(run({"plot-attention", "--text", "abc", "--t2m", path("t2m.ckpt"), "--out", path("free.pgm"),
                 "--max-frames", "5", "--no-incremental-attention"})
                .code,
            0);
}

TEST_F(CliTest, EvalLossReportsBothModels) {
  std::ofstream(dir_ / "heldout.txt") << "TOY-0001\nTOY-0002|x|y\n";
  const auto t = run({"eval-loss", "--t2m", path("t2m.ckpt"), "--cache", path("cache"), "--list", path("heldout.txt")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("examples 2"), std::string::npos);
  EXPECT_NE(t.out.find("total "), std::string::npos);
  const auto s = run({"eval-loss", "--ssrn", path("ssrn.ckpt"), "--cache", path("cache")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("examples 6"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"synth", "--bogus"}).code, 1);
  EXPECT_EQ(run({"gradcheck", "--precision", "half"}).code, 1);
  EXPECT_EQ(run({"synth", "--t2m", path("t2m.ckpt"), "--ssrn", path("ssrn.ckpt"), "--out", path("x.wav")}).code, 1);
  EXPECT_EQ(run({"synth", "--text", "a", "--t2m", path("absent.ckpt"), "--ssrn", path("ssrn.ckpt"), "--out",
                 path("x.wav")})
                .code,
            2);
  EXPECT_EQ(run({"synth", "--text", "a", "--t2m", path("ssrn.ckpt"), "--ssrn", path("ssrn.ckpt"), "--out",
                 path("x.wav")})
                .code,
            2);
  EXPECT_EQ(run({"synth", "--text", "???", "--t2m", path("t2m.ckpt"), "--ssrn", path("ssrn.ckpt"), "--out",
                 path("x.wav")})
                .code,
            2);
  EXPECT_EQ(run({"eval-loss", "--t2m", path("t2m.ckpt"), "--cache", path("nothing")}).code, 2);
  std::ofstream(dir_ / "bad.json") << R"({"batch_size": 3, "learning_rate": 1})";
  EXPECT_EQ(run({"train-t2m", "--config", path("bad.json"), "--cache", path("cache"), "--out", path("z.ckpt")}).code,
            2);
  EXPECT_EQ(run({"preprocess", "--metadata", path("missing.csv")}).code, 2);
}

TEST_F(CliTest, HelpDocumentsEveryTrainingKnob) {
  const auto r = run({"train-t2m", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--config", "--resume", "--max-iters", "--seed", "--cache", "--out", "--log"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  const auto synth = run({"synth", "--help"});
  for (const char* flag : {"--text", "--text-file", "--t2m", "--ssrn", "--out", "--no-incremental-attention",
                           "--max-frames"})
    EXPECT_NE(synth.out.find(flag), std::string::npos) << flag;
  EXPECT_NE(synth.out.find("200"), std::string::npos);
}

TEST_F(CliTest, GradcheckPrintsEveryOp) {
  const auto r = run({"gradcheck", "--shapes", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("float32"), std::string::npos);
  EXPECT_NE(r.out.find("float64"), std::string::npos);
  EXPECT_NE(r.out.find("max rel err"), std::string::npos);
}
