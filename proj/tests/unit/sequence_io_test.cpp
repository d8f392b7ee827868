#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oet/error.hpp"
#include "oet/image_io.hpp"
#include "oet/sequence_io.hpp"
#include "temp_dir.hpp"

namespace oet {
namespace {

namespace fs = std::filesystem;

void write_frames(const fs::path& dir, const std::vector<std::string>& names) {
  fs::create_directories(dir / "img");
  for (size_t i = 0; i < names.size(); ++i) {
    write_png(dir / "img" / names[i], Matrix::Constant(32, 32, static_cast<double>(i) / 20.0));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(LoadSequence, OrderedFramesWithoutGroundTruth) {
  testing::TempDir dir;
  write_frames(dir.path(), {"0001.png", "0002.png", "0003.png"});
  const LoadedSequence seq = load_sequence(dir.path());
  ASSERT_EQ(seq.frames.size(), 3u);
  EXPECT_FALSE(seq.manifest.ground_truth.has_value());
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(seq.frames[i].pixels(0, 0), static_cast<double>(i) / 20.0, 1.0 / 255);
    EXPECT_EQ(seq.frames[i].index, static_cast<int>(i));
  }
}

TEST(ScanSequence, NumericNotLexicographicOrder) {
  testing::TempDir dir;
  write_frames(dir.path(), {"2.png", "10.png", "1.png"});
  const SequenceManifest m = scan_sequence(dir.path());
  ASSERT_EQ(m.frame_paths.size(), 3u);
  EXPECT_EQ(m.frame_paths[0].filename(), "1.png");
  EXPECT_EQ(m.frame_paths[1].filename(), "2.png");
  EXPECT_EQ(m.frame_paths[2].filename(), "10.png");
  EXPECT_EQ(scan_sequence(dir.path()).frame_paths, m.frame_paths);
}

TEST(ScanSequence, Errors) {
  testing::TempDir dir;
  fs::create_directories(dir.path() / "img");
  EXPECT_THROW(scan_sequence(dir.path()), EmptySequence);
  std::vector<std::string> names;
  for (int i = 1; i <= 10; ++i) names.push_back(std::to_string(i) + ".png");
  write_frames(dir.path(), names);
  std::ofstream gt(dir.path() / "groundtruth_rect.txt");
  for (int i = 0; i < 9; ++i) gt << "1,2,3,4\n";
  gt.close();
  EXPECT_THROW(scan_sequence(dir.path()), CountMismatch);
}

TEST(LoadSequence, UndecodableFrame) {
  testing::TempDir dir;
  write_frames(dir.path(), {"0001.png"});
  std::ofstream(dir.path() / "img" / "0002.png") << "nope";
  EXPECT_THROW(load_sequence(dir.path()), UndecodableImage);
}

TEST(ParseGroundtruth, Examples) {
  const auto a = parse_groundtruth("10,20,30,40");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (BoundingBox{10, 20, 30, 40}));
  EXPECT_EQ(parse_groundtruth("10\t20\t30\t40\n")[0], a[0]);
  EXPECT_EQ(parse_groundtruth("10 20 30 40\n\n")[0], a[0]);
  try {
    parse_groundtruth("10,20,30");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  try {
    parse_groundtruth("1,2,3,4\n1,x,3,4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(WriteResults, FormatAndRoundTrip) {
  testing::TempDir dir;
  const std::vector<BoundingBox> one{{1, 2, 3, 4}};
  write_results(dir.path() / "r.txt", one);
  EXPECT_EQ(slurp(dir.path() / "r.txt"), "1.00,2.00,3.00,4.00\n");
  write_results(dir.path() / "e.txt", {});
  EXPECT_EQ(slurp(dir.path() / "e.txt"), "");

  const std::vector<BoundingBox> boxes{{1.234, 5.678, 9.1011, 12.1314}, {-3.3, 0.004, 7, 8.999}};
  write_results(dir.path() / "b.txt", boxes);
  const auto back = load_groundtruth(dir.path() / "b.txt");
  ASSERT_EQ(back.size(), 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(back[i].x, boxes[i].x, 0.01);
    EXPECT_NEAR(back[i].y, boxes[i].y, 0.01);
    EXPECT_NEAR(back[i].w, boxes[i].w, 0.01);
    EXPECT_NEAR(back[i].h, boxes[i].h, 0.01);
  }
}

TEST(WriteSequence, LoadsBack) {
  testing::TempDir dir;
  std::vector<Frame> frames(2);
  frames[0].pixels = Matrix::Constant(32, 40, 0.2);
  frames[1].pixels = Matrix::Constant(32, 40, 0.8);
  const std::vector<BoundingBox> gt{{1, 1, 8, 8}, {2, 1, 8, 8}};
  write_sequence(dir.path(), frames, gt);
  const LoadedSequence seq = load_sequence(dir.path());
  ASSERT_EQ(seq.frames.size(), 2u);
  ASSERT_TRUE(seq.manifest.ground_truth.has_value());
  EXPECT_EQ((*seq.manifest.ground_truth)[1], gt[1]);
  EXPECT_NEAR(seq.frames[1].pixels(5, 5), 0.8, 1.0 / 255);
}

}  // namespace
}  // namespace oet
