#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oet/sequence_io.hpp"
#include "oet_cli/commands.hpp"
#include "temp_dir.hpp"

namespace oet {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A short version of the reference fixture keeps these tests quick.
fs::path short_sequence(const testing::TempDir& dir) {
  const fs::path spec = dir.path() / "short.spec";
  std::ofstream(spec) << "length = 12\n";
  const fs::path seq = dir.path() / "seq";
  EXPECT_EQ(run({"synth", spec.string(), "--out", seq.string()}).code, 0);
  return seq;
}

TEST(Cli, TrackWritesOneLinePerFrameDeterministically) {
  testing::TempDir dir;
  const fs::path seq = short_sequence(dir);
  const fs::path a = dir.path() / "a.txt";
  const fs::path b = dir.path() / "b.txt";
  const CliRun r = run({"track", seq.string(), "--out", a.string(), "--seed", "7", "--workers", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("frames = 12"), std::string::npos);
  EXPECT_NE(r.out.find("relearns = "), std::string::npos);
  EXPECT_NE(r.out.find("wall time = "), std::string::npos);
  EXPECT_EQ(load_groundtruth(a).size(), 12u);
  ASSERT_EQ(run({"track", seq.string(), "--out", b.string(), "--seed", "7", "--workers", "3"}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, TrackNeedsInitBox) {
  testing::TempDir dir;
  const fs::path seq = short_sequence(dir);
  fs::remove(seq / "groundtruth_rect.txt");
  const CliRun r = run({"track", seq.string(), "--out", (dir.path() / "r.txt").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--init"), std::string::npos);
  const CliRun ok = run({"track", seq.string(), "--out", (dir.path() / "r.txt").string(), "--init",
                      "40,60,48,48", "--workers", "1"});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(Cli, TrackRejectsBadConfig) {
  testing::TempDir dir;
  const fs::path seq = short_sequence(dir);
  const fs::path cfg = dir.path() / "bad.cfg";
  std::ofstream(cfg) << "n_candidates = many\n";
  const CliRun r = run({"track", seq.string(), "--config", cfg.string(), "--out",
                     (dir.path() / "r.txt").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("n_candidates"), std::string::npos);
}

TEST(Cli, EvalPrintsSummaryAndWritesCurves) {
  testing::TempDir dir;
  const fs::path seq = short_sequence(dir);
  const fs::path gt = seq / "groundtruth_rect.txt";
  const fs::path report = dir.path() / "report.txt";
  const CliRun r = run({"eval", gt.string(), gt.string(), "--out", report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "precision@20 = 1.000, auc = 1.000\n");
  EXPECT_TRUE(fs::exists(dir.path() / "report_precision.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "report_success.csv"));

  const fs::path shorter = dir.path() / "short.txt";
  std::ofstream(shorter) << "1,2,3,4\n";
  EXPECT_EQ(run({"eval", shorter.string(), gt.string(), "--out", report.string()}).code, 1);
}

TEST(Cli, SynthOutputLoadsAndIsReproducible) {
  testing::TempDir dir;
  const fs::path a = dir.path() / "a";
  const fs::path b = dir.path() / "b";
  ASSERT_EQ(run({"synth", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"synth", "--out", b.string()}).code, 0);
  const LoadedSequence seq = load_sequence(a);
  EXPECT_EQ(seq.frames.size(), 120u);
  ASSERT_TRUE(seq.manifest.ground_truth.has_value());
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b / fs::relative(entry.path(), a))) << entry.path();
  }
}

TEST(Cli, SynthRejectsTrajectoryOutOfFrame) {
  testing::TempDir dir;
  const fs::path spec = dir.path() / "bad.spec";
  std::ofstream(spec) << "vx = 5\n";
  const CliRun r = run({"synth", spec.string(), "--out", (dir.path() / "x").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("trajectory"), std::string::npos);
}

TEST(Cli, SolverCheck) {
  const CliRun ok = run({"solver-check"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);

  const CliRun verbose = run({"solver-check", "--verbose"});
  EXPECT_NE(verbose.out.find("objective"), std::string::npos);

  const CliRun flipped = run({"solver-check", "--flip-e2-sign"});
  EXPECT_EQ(flipped.code, 2);
  EXPECT_NE(flipped.out.find("FAIL e2_zero_gradient"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"dance"}).code, 1);
  EXPECT_EQ(run({"eval", "only-one-file"}).code, 1);
  const CliRun help = run({"track", "--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("command-line flags, then the --config file"), std::string::npos);
}

}  // namespace
}  // namespace oet
