#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "oet/features.hpp"

namespace oet {

struct Occlusion {
  int first_frame = 50;  // inclusive
  int last_frame = 60;   // inclusive
  double fraction = 0.4;  // share of the patch area covered
  double intensity = 0.5;
};

struct IlluminationRamp {
  double gain_start = 0.7;
  double gain_end = 1.3;
};

/// A textured square patch moving at constant velocity over a static
/// textured background. The defaults describe the reference end-to-end
/// fixture.
struct SynthSpec {
  int width = 320;
  int height = 240;
  BoundingBox initial_box{40.0, 60.0, 48.0, 48.0};
  double vx = 1.5;
  double vy = 0.5;
  std::optional<Occlusion> occlusion = Occlusion{};
  std::optional<IlluminationRamp> illumination = IlluminationRamp{};
  double noise_std = 0.02;
  int length = 120;
  std::uint64_t seed = 1;

  /// Throws InvalidSpec, e.g. when the trajectory leaves the frame.
  void validate() const;
  BoundingBox box_at(int t) const;
  double gain_at(int t) const;
};

struct SyntheticSequence {
  std::vector<Frame> frames;
  std::vector<BoundingBox> ground_truth;
};

SyntheticSequence generate_sequence(const SynthSpec& spec);

/// Same `key = value` format as tracker configs. Keys: width, height,
/// box (x,y,w,h), vx, vy, occlusion (none | first,last,fraction),
/// occlusion_intensity, illumination (none | start,end), noise_std, length,
/// seed.
SynthSpec parse_synth_spec(std::string_view text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

}  // namespace oet
