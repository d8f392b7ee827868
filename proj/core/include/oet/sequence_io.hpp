#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oet/features.hpp"

namespace oet {

/// Sequence directory layout:
///
///   <dir>/img/0001.png ...      numbered frames (PNG, JPEG or PGM)
///   <dir>/groundtruth_rect.txt  optional, one `x,y,w,h` line per frame
struct SequenceManifest {
  std::string name;
  std::vector<std::filesystem::path> frame_paths;
  std::optional<std::vector<BoundingBox>> ground_truth;
};

struct LoadedSequence {
  SequenceManifest manifest;
  std::vector<Frame> frames;
};

inline constexpr std::string_view kImageDir = "img";
inline constexpr std::string_view kGroundTruthFile = "groundtruth_rect.txt";

/// Lists frames in numeric filename order and reads the ground truth.
/// Throws EmptySequence, CountMismatch or ParseError.
SequenceManifest scan_sequence(const std::filesystem::path& dir);

/// scan_sequence plus decoding every frame (UndecodableImage on failure).
LoadedSequence load_sequence(const std::filesystem::path& dir);

/// Accepts comma, tab or whitespace separated `x y w h` per non-empty line.
std::vector<BoundingBox> parse_groundtruth(std::string_view text);
std::vector<BoundingBox> load_groundtruth(const std::filesystem::path& path);

/// Formats boxes as `x,y,w,h` lines with two decimals.
std::string format_results(std::span<const BoundingBox> boxes);
void write_results(const std::filesystem::path& path,
                   std::span<const BoundingBox> boxes);

/// Writes frames as img/0001.png... plus groundtruth_rect.txt.
void write_sequence(const std::filesystem::path& dir,
                    std::span<const Frame> frames,
                    std::span<const BoundingBox> ground_truth);

}  // namespace oet
