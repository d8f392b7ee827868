#include "oet/tracker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "oet/error.hpp"

namespace oet {

namespace {

constexpr double kMinScale = 0.05;
constexpr double kInf = std::numeric_limits<double>::infinity();

// N, NE, E, SE, S, SW, W, NW in image coordinates (y grows downwards).
constexpr std::array<std::array<int, 2>, 8> kCompass{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

bool overlaps(const BoundingBox& b, int width, int height) {
  return b.x < width && b.y < height && b.x + b.w > 0.0 && b.y + b.h > 0.0;
}

BoundingBox clamp_into(BoundingBox b, int width, int height) {
  b.x = std::clamp(b.x, 0.0, std::max(0.0, width - b.w));
  b.y = std::clamp(b.y, 0.0, std::max(0.0, height - b.h));
  return b;
}

}  // namespace

void TrackerConfig::validate() const {
  auto fail = [](const char* key, const std::string& what) {
    throw ConfigError(key, what);
  };
  if (n_candidates < 2) fail("n_candidates", "must be at least 2");
  if (!(trans_std >= 0.0)) fail("trans_std", "must be non-negative");
  if (!(scale_std >= 0.0)) fail("scale_std", "must be non-negative");
  if (buffer_size < 1) fail("buffer_size", "must be positive");
  if (shift_magnitudes.empty()) fail("shift_magnitudes", "must not be empty");
  for (double s : shift_magnitudes) {
    if (!(s > 0.0)) fail("shift_magnitudes", "entries must be positive");
  }
  if (n_background != 8 * static_cast<int>(shift_magnitudes.size())) {
    fail("n_background", "must equal 8 x number of shift magnitudes (" +
                             std::to_string(8 * shift_magnitudes.size()) + ")");
  }
  if (relearn_interval < 1) fail("relearn_interval", "must be positive");
  if (!(observation_gain > 0.0)) fail("observation_gain", "must be positive");
  if (classifier_reg && !(*classifier_reg > 0.0)) {
    fail("classifier_reg", "must be positive");
  }
  if (workers < 1) fail("workers", "must be positive");
  if (!(solver.lambda > 0.0)) fail("lambda", "must be positive");
  if (solver.mu && !(*solver.mu > 0.0)) fail("mu", "must be positive");
  if (!(solver.tol > 0.0)) fail("tol", "must be positive");
  if (solver.max_iter < 1) fail("max_iter", "must be at least 1");
  if (!(solver.label_sigma > 0.0)) fail("label_sigma", "must be positive");
  if (!(solver.rank_tol >= 0.0)) fail("rank_tol", "must be non-negative");
}

// ---------------------------------------------------------------------------

TargetBuffer::TargetBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw InvalidParameter("TargetBuffer: capacity must be positive");
}

TargetBuffer::TargetBuffer(int capacity, Vector initial, int frame)
    : TargetBuffer(capacity) {
  pinned_ = true;
  entries_.push_back({std::move(initial), frame});
}

void TargetBuffer::push(Vector feature, int frame) {
  entries_.push_back({std::move(feature), frame});
  if (size() > capacity_) {
    const auto oldest = entries_.begin() + (pinned_ ? 1 : 0);
    if (oldest != entries_.end()) entries_.erase(oldest);
  }
}

TargetBuffer update_buffer(TargetBuffer buf, Vector target_feature, int frame) {
  buf.push(std::move(target_feature), frame);
  return buf;
}

// ---------------------------------------------------------------------------

std::vector<MotionState> sample_candidates(std::span<const Particle> parents,
                                           const TrackerConfig& cfg,
                                           std::mt19937_64& rng) {
  if (parents.empty()) {
    throw InvalidInput("sample_candidates: need at least one parent");
  }
  double best = kInf;
  for (const auto& p : parents) best = std::min(best, p.psi);
  std::vector<double> weights(parents.size(), 0.0);
  double total = 0.0;
  if (std::isfinite(best)) {
    for (size_t i = 0; i < parents.size(); ++i) {
      const double psi = parents[i].psi;
      weights[i] = std::isfinite(psi)
                       ? std::exp(-cfg.observation_gain * (psi - best))
                       : 0.0;
      total += weights[i];
    }
  }
  if (!(total > 0.0)) std::fill(weights.begin(), weights.end(), 1.0);

  std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> shift(0.0, 1.0);
  std::vector<MotionState> out;
  out.reserve(static_cast<size_t>(cfg.n_candidates));
  for (int i = 0; i < cfg.n_candidates; ++i) {
    MotionState s = parents[pick(rng)].state;
    // Always draw all three so the stream layout does not depend on the
    // noise settings.
    const double dx = shift(rng);
    const double dy = shift(rng);
    const double ds = shift(rng);
    s.x += cfg.trans_std * dx;
    s.y += cfg.trans_std * dy;
    s.sigma = std::max(kMinScale, s.sigma + cfg.scale_std * ds);
    out.push_back(s);
  }
  return out;
}

std::vector<double> fuse_scores(std::span<const double> rep_errors,
                                std::span<const double> disc_errors) {
  if (rep_errors.size() != disc_errors.size()) {
    throw InvalidInput("fuse_scores: error lists differ in length");
  }
  const size_t n = rep_errors.size();
  auto finite = [&](size_t i) {
    return std::isfinite(rep_errors[i]) && std::isfinite(disc_errors[i]);
  };
  double rep_sq = 0.0;
  double disc_sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!finite(i)) continue;
    rep_sq += rep_errors[i] * rep_errors[i];
    disc_sq += disc_errors[i] * disc_errors[i];
  }
  const double rep_norm = std::sqrt(rep_sq);
  const double disc_norm = std::sqrt(disc_sq);
  std::vector<double> psi(n, kInf);
  for (size_t i = 0; i < n; ++i) {
    if (!finite(i)) continue;
    double v = 0.0;
    if (rep_norm > 0.0) v += rep_errors[i] / rep_norm;
    if (disc_norm > 0.0) v += disc_errors[i] / disc_norm;
    psi[i] = v;
  }
  return psi;
}

std::vector<CandidateScore> score_candidates(std::span<const Vector> features,
                                             const SubspaceModel& model,
                                             const LinearClassifier& clf,
                                             int workers) {
  if (features.size() < 2) {
    throw InvalidInput("score_candidates: need at least two candidates");
  }
  if (clf.weights.size() != model.dim) {
    throw InvalidInput("score_candidates: classifier and model dimensions differ");
  }
  std::vector<CandidateScore> scores(features.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      CandidateScore& s = scores[i];
      if (!features[i].allFinite()) {
        s.failed = true;
        s.rep_error = kInf;
        s.disc_error = kInf;
        continue;
      }
      try {
        s.embedding = project_candidate(features[i], model);
        s.rep_error = s.embedding.rep_error;
        s.disc_error = discrimination_error(clf, s.embedding.z);
      } catch (const Error&) {
        s.failed = true;
        s.rep_error = kInf;
        s.disc_error = kInf;
      }
    }
  };

  const size_t n = features.size();
  const size_t threads = std::clamp<size_t>(static_cast<size_t>(workers), 1, n);
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back(work, n * t / threads, n * (t + 1) / threads);
    }
  }

  std::vector<double> rep(n);
  std::vector<double> disc(n);
  for (size_t i = 0; i < n; ++i) {
    rep[i] = scores[i].rep_error;
    disc[i] = scores[i].disc_error;
  }
  const std::vector<double> psi = fuse_scores(rep, disc);
  for (size_t i = 0; i < n; ++i) {
    scores[i].psi = psi[i];
    if (!std::isfinite(psi[i])) scores[i].failed = true;
  }
  return scores;
}

int localize(std::span<const double> psi) {
  int best = -1;
  for (size_t i = 0; i < psi.size(); ++i) {
    if (!std::isfinite(psi[i])) continue;
    if (best < 0 || psi[i] < psi[static_cast<size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw LocalizationFailure("localize: no candidate has a finite score");
  return best;
}

std::vector<BoundingBox> background_boxes(const BoundingBox& target,
                                          std::span<const double> magnitudes,
                                          int frame_width, int frame_height) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(8 * magnitudes.size());
  for (const auto& dir : kCompass) {
    for (double m : magnitudes) {
      BoundingBox b = target;
      b.x += dir[0] * m;
      b.y += dir[1] * m;
      if (!overlaps(b, frame_width, frame_height)) {
        b = clamp_into(b, frame_width, frame_height);
      }
      boxes.push_back(b);
    }
  }
  return boxes;
}

std::vector<Vector> collect_background(const Frame& frame,
                                       const BoundingBox& target,
                                       const TrackerConfig& cfg) {
  const auto boxes = background_boxes(target, cfg.shift_magnitudes,
                                      frame.width(), frame.height());
  std::vector<Vector> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) {
    out.push_back(extract_feature(frame, b, cfg.feature_mode));
  }
  return out;
}

// ---------------------------------------------------------------------------

Tracker::Tracker(TrackerConfig cfg)
    : cfg_(std::move(cfg)), rng_(cfg_.seed), buffer_(1) {
  cfg_.validate();
  buffer_ = TargetBuffer(cfg_.buffer_size);
}

void Tracker::initialize(const Frame& frame, const BoundingBox& box) {
  if (!box.valid()) throw InvalidInput("Tracker: initial box must have positive extents");
  if (!overlaps(box, frame.width(), frame.height())) {
    throw OutOfFrame("Tracker: initial box lies outside frame 0");
  }
  rng_.seed(cfg_.seed);
  base_w_ = box.w;
  base_h_ = box.h;
  frame_index_ = 0;
  last_box_ = box;
  buffer_ = TargetBuffer(cfg_.buffer_size,
                         extract_feature(frame, box, cfg_.feature_mode), 0);

  // One-pixel jitters of the initial target fill the positive set until the
  // buffer has enough real targets.
  jitter_targets_.clear();
  for (const auto& dir : kCompass) {
    BoundingBox b = box;
    b.x += dir[0];
    b.y += dir[1];
    jitter_targets_.push_back(extract_feature(frame, b, cfg_.feature_mode));
  }
  background_ = collect_background(frame, box, cfg_);
  particles_ = {Particle{{box.center_x(), box.center_y(), 1.0}, 0.0}};
  model_.reset();
  classifier_.reset();
}

bool Tracker::relearn() {
  const int n_pos = cfg_.buffer_size;
  const int n_neg = static_cast<int>(background_.size());
  const Eigen::Index m = buffer_.entries().front().feature.size();
  Matrix x(m, n_pos + n_neg);
  int col = 0;
  for (const auto& entry : buffer_.entries()) x.col(col++) = entry.feature;
  for (size_t k = 0; col < n_pos; ++k) {
    x.col(col++) = jitter_targets_[k % jitter_targets_.size()];
  }
  for (const auto& b : background_) x.col(col++) = b;

  TrainingSet train{std::move(x), LabelMatrix::from_counts(n_pos, n_neg)};
  try {
    SubspaceModel model = learn_embedding(train, cfg_.solver);
    Matrix z(model.dim, train.features.cols());
    for (Eigen::Index i = 0; i < train.features.cols(); ++i) {
      z.col(i) = project_candidate(train.features.col(i), model).z;
    }
    std::vector<int> labels(static_cast<size_t>(n_pos), 1);
    labels.resize(static_cast<size_t>(n_pos + n_neg), 0);
    const double reg =
        cfg_.classifier_reg.value_or(default_classifier_reg(z.cols()));
    LinearClassifier clf = train_classifier(z, labels, reg);
    model_ = std::move(model);
    classifier_ = std::move(clf);
    return true;
  } catch (const DegenerateSubspace&) {
  } catch (const InvalidTrainingSet&) {
  }
  return false;
}

FrameReport Tracker::step(const Frame& frame) {
  if (particles_.empty()) throw InvalidInput("Tracker: step() before initialize()");
  const int t = ++frame_index_;
  FrameReport report;

  if (t == 1 || t % cfg_.relearn_interval == 0) {
    report.relearned = relearn();
  }
  if (!model_ || !classifier_) {
    report.box = last_box_;
    report.localization_failed = true;
    return report;
  }
  report.subspace_dim = model_->dim;

  const std::vector<MotionState> states = sample_candidates(particles_, cfg_, rng_);
  std::vector<BoundingBox> boxes(states.size());
  std::vector<Vector> features(states.size());
  std::vector<bool> usable(states.size(), true);
  for (size_t i = 0; i < states.size(); ++i) {
    boxes[i] = states[i].box(base_w_, base_h_);
    try {
      features[i] = extract_feature(frame, boxes[i], cfg_.feature_mode);
    } catch (const OutOfFrame&) {
      usable[i] = false;
      features[i] = Vector::Constant(model_->mean.size(),
                                     std::numeric_limits<double>::quiet_NaN());
    }
  }

  std::vector<CandidateScore> scores =
      score_candidates(features, *model_, *classifier_, cfg_.workers);
  std::vector<double> psi(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    psi[i] = usable[i] ? scores[i].psi : kInf;
  }

  int best = -1;
  try {
    best = localize(psi);
  } catch (const LocalizationFailure&) {
    report.box = last_box_;
    report.localization_failed = true;
    return report;
  }

  particles_.clear();
  particles_.reserve(states.size());
  for (size_t i = 0; i < states.size(); ++i) particles_.push_back({states[i], psi[i]});

  last_box_ = boxes[static_cast<size_t>(best)];
  report.box = last_box_;
  report.psi = psi[static_cast<size_t>(best)];
  buffer_.push(std::move(features[static_cast<size_t>(best)]), t);
  background_ = collect_background(frame, last_box_, cfg_);
  return report;
}

TrackResult track_sequence(std::span<const Frame> frames,
                           const BoundingBox& init_box,
                           const TrackerConfig& cfg) {
  TrackResult result;
  if (frames.empty()) return result;
  Tracker tracker(cfg);
  tracker.initialize(frames[0], init_box);
  result.boxes.push_back(init_box);
  result.frames.push_back(FrameReport{init_box, false, false, 0.0, 0});

  double psi_sum = 0.0;
  int psi_count = 0;
  for (size_t i = 1; i < frames.size(); ++i) {
    FrameReport r = tracker.step(frames[i]);
    result.boxes.push_back(r.box);
    if (r.relearned) ++result.relearn_count;
    if (r.localization_failed) {
      ++result.failure_count;
    } else {
      psi_sum += r.psi;
      ++psi_count;
    }
    result.frames.push_back(r);
  }
  result.mean_psi = psi_count > 0 ? psi_sum / psi_count : 0.0;
  return result;
}

}  // namespace oet
