#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "oet/classifier.hpp"
#include "oet/embedding.hpp"
#include "oet/features.hpp"
#include "oet/representation.hpp"

namespace oet {

/// Center position plus a scale multiplier on the initial box size.
struct MotionState {
  double x = 0.0;
  double y = 0.0;
  double sigma = 1.0;

  BoundingBox box(double base_w, double base_h) const {
    return BoundingBox::from_center(x, y, sigma * base_w, sigma * base_h);
  }
};

struct TrackerConfig {
  int n_candidates = 400;
  double trans_std = 2.0;
  double scale_std = 0.01;
  int buffer_size = 50;
  int n_background = 48;
  std::vector<double> shift_magnitudes{5, 7, 9, 11, 13, 15};
  int relearn_interval = 10;
  FeatureMode feature_mode = FeatureMode::kHog;
  SolverConfig solver;
  /// Observation model p(c|s) proportional to exp(-observation_gain * psi).
  double observation_gain = 400.0;
  /// Ridge weight for the classifier; unset means 1e-3 * n.
  std::optional<double> classifier_reg;
  std::uint64_t seed = 0;
  /// Threads used for candidate scoring; results do not depend on it.
  int workers = 1;

  void validate() const;
};

/// Recent target features with the initial-frame target pinned.
class TargetBuffer {
 public:
  struct Entry {
    Vector feature;
    int frame = 0;
  };

  explicit TargetBuffer(int capacity);
  TargetBuffer(int capacity, Vector initial, int frame = 0);

  /// Appends; when over capacity the oldest non-pinned entry is evicted.
  void push(Vector feature, int frame);

  int capacity() const noexcept { return capacity_; }
  int size() const noexcept { return static_cast<int>(entries_.size()); }
  bool has_pinned() const noexcept { return pinned_; }
  /// Pinned entry first (if any), then the rest oldest-first.
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  int capacity_;
  bool pinned_ = false;
  std::vector<Entry> entries_;
};

TargetBuffer update_buffer(TargetBuffer buf, Vector target_feature, int frame);

/// A motion state with the fused score of its candidate (lower is better).
struct Particle {
  MotionState state;
  double psi = 0.0;
};

/// Resamples parents with probability proportional to
/// exp(-cfg.observation_gain * psi) and perturbs each draw with Gaussian
/// motion noise. Falls back to uniform resampling when every weight is zero.
std::vector<MotionState> sample_candidates(std::span<const Particle> parents,
                                           const TrackerConfig& cfg,
                                           std::mt19937_64& rng);

/// psi_i = phi_i / ||phi||_2 + varphi_i / ||varphi||_2 over the finite
/// entries; a zero norm drops that term. Non-finite inputs give psi = +inf.
std::vector<double> fuse_scores(std::span<const double> rep_errors,
                                std::span<const double> disc_errors);

struct CandidateScore {
  CandidateEmbedding embedding;
  double rep_error = 0.0;
  double disc_error = 0.0;
  double psi = 0.0;
  bool failed = false;
};

/// Projects every feature, evaluates both errors and fuses them. Work is
/// split across `workers` threads; results are merged by index.
std::vector<CandidateScore> score_candidates(std::span<const Vector> features,
                                             const SubspaceModel& model,
                                             const LinearClassifier& clf,
                                             int workers = 1);

/// Index of the smallest psi, lowest index on ties. Throws
/// LocalizationFailure when no psi is finite.
int localize(std::span<const double> psi);

/// The 8 compass shifts of every magnitude, in (direction, magnitude) order
/// with directions N, NE, E, SE, S, SW, W, NW.
std::vector<BoundingBox> background_boxes(const BoundingBox& target,
                                          std::span<const double> magnitudes,
                                          int frame_width, int frame_height);

std::vector<Vector> collect_background(const Frame& frame,
                                       const BoundingBox& target,
                                       const TrackerConfig& cfg);

struct FrameReport {
  BoundingBox box;
  bool localization_failed = false;
  bool relearned = false;
  double psi = 0.0;
  int subspace_dim = 0;
};

struct TrackResult {
  std::vector<BoundingBox> boxes;
  std::vector<FrameReport> frames;
  int relearn_count = 0;
  int failure_count = 0;
  double mean_psi = 0.0;
};

/// Online tracker. Feed frame 0 through initialize() and every later frame
/// through step().
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);

  void initialize(const Frame& frame, const BoundingBox& box);
  FrameReport step(const Frame& frame);

  const TrackerConfig& config() const noexcept { return cfg_; }
  const std::optional<SubspaceModel>& model() const noexcept { return model_; }
  const std::optional<LinearClassifier>& classifier() const noexcept {
    return classifier_;
  }
  const TargetBuffer& buffer() const noexcept { return buffer_; }

 private:
  // Rebuilds the model and classifier; keeps the old ones on failure.
  bool relearn();

  TrackerConfig cfg_;
  std::mt19937_64 rng_;
  double base_w_ = 0.0;
  double base_h_ = 0.0;
  int frame_index_ = 0;
  BoundingBox last_box_;
  TargetBuffer buffer_;
  std::vector<Vector> jitter_targets_;
  std::vector<Vector> background_;
  std::vector<Particle> particles_;
  std::optional<SubspaceModel> model_;
  std::optional<LinearClassifier> classifier_;
};

TrackResult track_sequence(std::span<const Frame> frames,
                           const BoundingBox& init_box,
                           const TrackerConfig& cfg);

}  // namespace oet
