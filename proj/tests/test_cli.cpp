// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adaptmol/cli.hpp"
#include "adaptmol/dataset.hpp"
#include "adaptmol/synthetic.hpp"

namespace adaptmol {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"adaptmol"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// A synthetic dataset and a small trained checkpoint shared by the tests.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() / "adaptmol_cli_test");
    fs::remove_all(*dir_);
    fs::create_directories(*dir_);
    const CliRun synth = run({"synth", "--output-dir", dir_->string(), "--molecules", "200", "--seed", "3"});
    ASSERT_EQ(synth.code, kExitOk) << synth.err;
    const CliRun train = run({"train", "--dataset", path("dataset.csv"), "--split", path("split.txt"), "--checkpoint",
                           path("model.json"), "--log", path("train.log"), "--episodes", "20", "--shots", "3",
                           "--graph-dim", "16", "--hash-dim", "256", "--seq-dim", "8", "--seed", "7"});
    ASSERT_EQ(train.code, kExitOk) << train.err;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST(Dispatch, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  const CliRun unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"train", "--help"}).code, kExitOk);
}

TEST(Dispatch, EvalWithoutCheckpointPrintsUsage) {
  const CliRun r = run({"eval", "--dataset", "d.csv", "--split", "s.txt"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--checkpoint"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(Dispatch, UnknownFlagIsUsageError) {
  const CliRun r = run({"train", "--dataset", "d.csv", "--split", "s.txt", "--no-such-flag", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("no-such-flag"), std::string::npos) << r.err;
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(run({"train", "--dataset", path("missing.csv"), "--split", path("split.txt")}).code, kExitData);
  write(*dir_ / "bad.csv", "smiles,task_a\nCCO,2\n");
  const CliRun bad = run({"train", "--dataset", path("bad.csv"), "--split", path("split.txt")});
  EXPECT_EQ(bad.code, kExitData);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
  write(*dir_ / "garbage.json", "{not json");
  EXPECT_EQ(run({"eval", "--checkpoint", path("garbage.json"), "--dataset", path("dataset.csv"), "--split",
                 path("split.txt")})
                .code,
            kExitData);
}

TEST_F(CliTest, ConfigurationErrorsExitOne) {
  const CliRun r = run({"train", "--dataset", path("dataset.csv"), "--split", path("split.txt"), "--learning-rate",
                     "0.5", "--episodes", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("learning"), std::string::npos) << r.err;
  EXPECT_EQ(run({"eval", "--checkpoint", path("model.json"), "--dataset", path("dataset.csv"), "--split",
                 path("split.txt"), "--format", "yaml"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, TrainTwiceGivesIdenticalCheckpoints) {
  for (const char* name : {"a.json", "b.json"}) {
    const CliRun r = run({"train", "--dataset", path("dataset.csv"), "--split", path("split.txt"), "--checkpoint",
                       path(name), "--episodes", "10", "--shots", "3", "--graph-dim", "8", "--hash-dim", "128",
                       "--seq-dim", "4", "--seed", "7", "--log", path("ab.log")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  const std::string a = slurp(*dir_ / "a.json");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(*dir_ / "b.json"));
}

TEST_F(CliTest, FlagsOverrideConfigFileOverDefaults) {
  write(*dir_ / "run.cfg",
        "# experiment record\n"
        "seed = 5\n"
        "episodes = 4\n"
        "graph_dim = 8\n"
        "hash-dim = 128\n"
        "seq_dim = 4\n"
        "shots = 3\n");
  const CliRun r = run({"train", "--config", path("run.cfg"), "--dataset", path("dataset.csv"), "--split",
                     path("split.txt"), "--checkpoint", path("cfg.json"), "--log", path("cfg.log"), "--seed", "9"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string log = slurp(*dir_ / "cfg.log");
  EXPECT_NE(log.find("seed=9"), std::string::npos) << log;
  EXPECT_NE(log.find("\nepisodes=4\n"), std::string::npos) << log;
  EXPECT_NE(log.find("graph-dim=8"), std::string::npos) << log;
  EXPECT_NE(log.find("query-size=16"), std::string::npos) << log;
  const auto doc = nlohmann::json::parse(slurp(*dir_ / "cfg.json"));
  EXPECT_EQ(doc["run_config"]["seed"], 9);
  EXPECT_EQ(doc["run_config"]["episodes"], 4);
  EXPECT_EQ(doc["model_config"]["graph_dim"], 8);
  EXPECT_EQ(doc["model_config"]["hash_dim"], 128);
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
  write(*dir_ / "bad.cfg", "episodes = 4\nwarmup = 3\n");
  const CliRun r = run({"train", "--config", path("bad.cfg"), "--dataset", path("dataset.csv"), "--split",
                     path("split.txt"), "--checkpoint", path("bad.json")});
  EXPECT_EQ(r.code, kExitUsage) << r.err;
  EXPECT_FALSE(std::filesystem::exists(*dir_ / "bad.json"));
}

TEST_F(CliTest, EvalReportsAndDeterminism) {
  const CliRun text = run({"eval", "--checkpoint", path("model.json"), "--dataset", path("dataset.csv"), "--split",
                        path("split.txt"), "--shots", "3", "--runs", "10", "--seed", "4"});
  ASSERT_EQ(text.code, kExitOk) << text.err;
  for (const char* metric : {"roc_auc ", "f1 ", "pr_auc "}) {
    EXPECT_NE(text.out.find(metric), std::string::npos) << text.out;
  }
  const CliRun jobs = run({"eval", "--checkpoint", path("model.json"), "--dataset", path("dataset.csv"), "--tasks",
                        "t8,t9", "--shots", "3", "--runs", "10", "--seed", "4", "--jobs", "3"});
  ASSERT_EQ(jobs.code, kExitOk) << jobs.err;
  EXPECT_EQ(text.out, jobs.out);
  const CliRun json = run({"eval", "--checkpoint", path("model.json"), "--dataset", path("dataset.csv"), "--split",
                        path("split.txt"), "--shots", "3", "--runs", "10", "--seed", "4", "--format", "json", "-o",
                        path("report.json")});
  ASSERT_EQ(json.code, kExitOk) << json.err;
  const auto doc = nlohmann::json::parse(slurp(*dir_ / "report.json"));
  EXPECT_EQ(doc["shots"], 3);
  const auto& report = doc["metrics"];
  for (const char* metric : {"roc_auc", "f1", "pr_auc"}) {
    EXPECT_TRUE(report[metric].contains("mean"));
    EXPECT_TRUE(report[metric].contains("std"));
    EXPECT_EQ(report[metric]["count"], 20);
  }
}

TEST_F(CliTest, PredictWritesProbabilities) {
  write(*dir_ / "queries.txt", "CC(=O)NCCc1ccccc1\nCCOCCO\n");
  const CliRun r = run({"predict", "--checkpoint", path("model.json"), "--support", path("dataset.csv"), "--task", "t8",
                     "--queries", path("queries.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    const double p = std::stod(line.substr(tab + 1));
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    ++count;
  }
  EXPECT_EQ(count, 2);
  EXPECT_EQ(run({"predict", "--checkpoint", path("model.json"), "--support", path("dataset.csv"), "--task", "nope",
                 "--queries", path("queries.txt")})
                .code,
            kExitUsage);
}

// Atom index sets of every N-C(=O) motif in a molecule.
std::vector<std::vector<int>> motifs_of(const std::string& smiles) {
  return amide_motifs(parse_smiles(smiles));
}

TEST(RationaleMotif, ReportedRationalesContainTheMotif) {
  const fs::path dir = fs::temp_directory_path() / "adaptmol_cli_motif";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };
  ASSERT_EQ(run({"synth", "--output-dir", dir.string()}).code, kExitOk);
  const CliRun train = run({"train", "--dataset", p("dataset.csv"), "--split", p("split.txt"), "--checkpoint",
                         p("model.json"), "--episodes", "500", "--log", p("train.log")});
  ASSERT_EQ(train.code, kExitOk) << train.err;

  const Dataset ds = load_dataset(p("dataset.csv"));
  const int task = ds.task_index("t8");
  std::string positives;
  int chosen = 0;
  for (int m : ds.molecules_with_label(task, 1)) {
    if (chosen == 50) break;
    positives += ds.smiles(static_cast<std::size_t>(m)) + "\n";
    ++chosen;
  }
  write(dir / "positives.txt", positives);
  const CliRun r = run({"rationale", "--checkpoint", p("model.json"), "--support", p("dataset.csv"), "--task", "t8",
                     "--molecules", p("positives.txt"), "--delta", "0.7", "--summary", p("summary.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  std::istringstream lines(r.out);
  std::string line;
  int reported = 0, with_motif = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string smiles, atoms_text, score;
    std::getline(cells, smiles, '\t');
    std::getline(cells, atoms_text, '\t');
    std::getline(cells, score, '\t');
    EXPECT_GE(std::stod(score), 0.7);
    std::set<int> atoms;
    std::istringstream idx(atoms_text);
    std::string cell;
    while (std::getline(idx, cell, ',')) atoms.insert(std::stoi(cell));
    bool contains = false;
    for (const auto& motif : motifs_of(smiles)) {
      contains = contains || std::all_of(motif.begin(), motif.end(), [&](int a) { return atoms.count(a) > 0; });
    }
    ++reported;
    with_motif += contains ? 1 : 0;
  }
  ASSERT_GT(reported, 0);
  const double fraction = static_cast<double>(with_motif) / reported;
  RecordProperty("motif_fraction", std::to_string(fraction));
  EXPECT_GE(fraction, 0.8) << with_motif << " of " << reported;
  fs::remove_all(dir);
}

}  // namespace
}  // namespace adaptmol
