#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <algorithm>

#include "oet/error.hpp"
#include "oet/metrics.hpp"
#include "oet/synth.hpp"
#include "oet/tracker.hpp"

namespace oet {
namespace {

TEST(SampleCandidates, ZeroNoiseCopiesParent) {
  TrackerConfig cfg;
  cfg.trans_std = 0;
  cfg.scale_std = 0;
  const Particle parent{{10.0, 20.0, 1.0}, 0.0};
  std::mt19937_64 rng(1);
  const auto states = sample_candidates(std::span(&parent, 1), cfg, rng);
  ASSERT_EQ(states.size(), 400u);
  for (const auto& s : states) {
    EXPECT_EQ(s.x, 10.0);
    EXPECT_EQ(s.y, 20.0);
    EXPECT_EQ(s.sigma, 1.0);
  }
}

TEST(SampleCandidates, NoiseIsCentered) {
  TrackerConfig cfg;
  const Particle parent{{0.0, 0.0, 1.0}, 0.0};
  std::mt19937_64 rng(2);
  const auto states = sample_candidates(std::span(&parent, 1), cfg, rng);
  double mean = 0;
  for (const auto& s : states) mean += s.x;
  EXPECT_LT(std::abs(mean / 400.0), 3.0 * 2.0 / 20.0);
}

TEST(SampleCandidates, SeedDeterminesOutput) {
  TrackerConfig cfg;
  std::vector<Particle> parents{{{0, 0, 1}, 0.2}, {{5, 5, 1.1}, 0.1}, {{9, 1, 0.9}, 0.3}};
  std::mt19937_64 a(3), b(3);
  const auto sa = sample_candidates(parents, cfg, a);
  const auto sb = sample_candidates(parents, cfg, b);
  for (size_t i = 0; i < sa.size(); ++i) {
    EXPECT_EQ(sa[i].x, sb[i].x);
    EXPECT_EQ(sa[i].y, sb[i].y);
    EXPECT_EQ(sa[i].sigma, sb[i].sigma);
  }
}

TEST(SampleCandidates, FavorsLowPsiParents) {
  TrackerConfig cfg;
  cfg.trans_std = 0;
  cfg.scale_std = 0;
  std::vector<Particle> parents{{{0, 0, 1}, 0.0}, {{100, 0, 1}, 0.05}};
  std::mt19937_64 rng(4);
  int near_good = 0;
  for (const auto& s : sample_candidates(parents, cfg, rng)) near_good += s.x == 0 ? 1 : 0;
  // exp(-400 * 0.05) makes the second parent negligible.
  EXPECT_EQ(near_good, 400);
}

TEST(FuseScores, Examples) {
  const std::vector<double> rep{3, 4, 0};
  const std::vector<double> disc{0, 0, 0};
  const auto psi = fuse_scores(rep, disc);
  EXPECT_NEAR(psi[0], 0.6, 1e-15);
  EXPECT_NEAR(psi[1], 0.8, 1e-15);
  EXPECT_EQ(psi[2], 0.0);

  const std::vector<double> same(5, 2.5);
  const auto flat = fuse_scores(same, same);
  for (double v : flat) EXPECT_EQ(v, flat[0]);
}

TEST(FuseScores, ScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 3);
  std::vector<double> rep(50), disc(50), rep10(50);
  for (int i = 0; i < 50; ++i) {
    rep[i] = u(rng);
    disc[i] = u(rng);
    rep10[i] = 10 * rep[i];
  }
  const auto a = fuse_scores(rep, disc);
  const auto b = fuse_scores(rep10, disc);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_EQ(localize(a), localize(b));
}

TEST(FuseScores, NonFiniteBecomesInfinite) {
  const std::vector<double> rep{1, NAN, 2};
  const std::vector<double> disc{1, 1, 1};
  const auto psi = fuse_scores(rep, disc);
  EXPECT_TRUE(std::isinf(psi[1]));
  EXPECT_EQ(localize(psi), 0);
}

TEST(Localize, Examples) {
  EXPECT_EQ(localize(std::vector<double>{0.5, 0.2, 0.9}), 1);
  EXPECT_EQ(localize(std::vector<double>{0.3, 0.3, 0.3}), 0);
  EXPECT_THROW(localize(std::vector<double>{INFINITY, NAN}), LocalizationFailure);
}

TEST(Localize, MatchesArgmaxOfWeights) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 2);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> psi(30);
    for (double& v : psi) v = u(rng);
    int best = 0;
    for (int i = 1; i < 30; ++i) {
      if (std::exp(-psi[i]) > std::exp(-psi[best])) best = i;
    }
    EXPECT_EQ(localize(psi), best);
  }
}

TEST(TargetBuffer, EvictsOldestNonPinned) {
  TargetBuffer buf(50, Vector::Constant(2, -1.0), 0);
  for (int i = 1; i < 50; ++i) buf = update_buffer(std::move(buf), Vector::Constant(2, i), i);
  ASSERT_EQ(buf.size(), 50);
  buf = update_buffer(std::move(buf), Vector::Constant(2, 50), 50);
  EXPECT_EQ(buf.size(), 50);
  EXPECT_EQ(buf.entries()[0].frame, 0);
  EXPECT_EQ(buf.entries()[1].frame, 2);
  for (int i = 51; i < 151; ++i) buf.push(Vector::Constant(2, i), i);
  EXPECT_EQ(buf.entries()[0].frame, 0);
  EXPECT_EQ(buf.entries()[0].feature(0), -1.0);
}

TEST(TargetBuffer, GrowsUntilFull) {
  TargetBuffer buf(5);
  buf.push(Vector::Zero(1), 0);
  EXPECT_EQ(buf.size(), 1);
  EXPECT_FALSE(buf.has_pinned());
  buf.push(Vector::Zero(1), 1);
  EXPECT_EQ(buf.size(), 2);
}

TEST(BackgroundBoxes, LayoutAndCount) {
  const BoundingBox target{100, 100, 20, 20};
  const std::vector<double> mags{5, 7, 9, 11, 13, 15};
  const auto boxes = background_boxes(target, mags, 320, 320);
  ASSERT_EQ(boxes.size(), 48u);
  std::set<std::pair<double, double>> distinct;
  for (const auto& b : boxes) distinct.insert({b.x, b.y});
  EXPECT_EQ(distinct.size(), 48u);
  // Direction E, magnitude 5.
  EXPECT_EQ(boxes[2 * 6].x, 105.0);
  EXPECT_EQ(boxes[2 * 6].y, 100.0);
  // Corner targets still give 48 boxes.
  EXPECT_EQ(background_boxes({0, 0, 20, 20}, mags, 40, 40).size(), 48u);
}

TEST(CollectBackground, FeatureCount) {
  const SyntheticSequence seq = generate_sequence(SynthSpec{});
  TrackerConfig cfg;
  const auto feats = collect_background(seq.frames[0], seq.ground_truth[0], cfg);
  ASSERT_EQ(feats.size(), 48u);
  for (const auto& f : feats) EXPECT_EQ(f.size(), 576);
}

TEST(TrackerConfig, Validate) {
  TrackerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_candidates = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.solver.lambda = 0;
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "lambda");
  }
}

TEST(Localize, PicksTrueTargetAmongDistractors) {
  SynthSpec spec;
  spec.length = 12;
  spec.occlusion.reset();
  spec.illumination.reset();
  const SyntheticSequence seq = generate_sequence(spec);
  Tracker tracker(TrackerConfig{});
  tracker.initialize(seq.frames[0], seq.ground_truth[0]);
  for (int t = 1; t <= 10; ++t) tracker.step(seq.frames[static_cast<size_t>(t)]);
  ASSERT_TRUE(tracker.model().has_value());
  const Frame& frame = seq.frames[11];
  const BoundingBox truth = seq.ground_truth[11];
  std::vector<Vector> feats;
  for (double dx : {-12.0, 10.0}) {
    for (double dy : {-10.0, 0.0, 14.0}) {
      feats.push_back(extract_feature(frame, {truth.x + dx, truth.y + dy, truth.w, truth.h},
                                      FeatureMode::kHog));
    }
  }
  feats.insert(feats.begin() + 3, extract_feature(frame, truth, FeatureMode::kHog));
  const auto scores = score_candidates(feats, *tracker.model(), *tracker.classifier());
  std::vector<double> psi;
  for (const auto& s : scores) psi.push_back(s.psi);
  EXPECT_EQ(localize(psi), 3);
}

TEST(ScoreCandidates, WorkerCountDoesNotChangeResults) {
  SynthSpec spec;
  spec.length = 3;
  const SyntheticSequence seq = generate_sequence(spec);
  Tracker tracker(TrackerConfig{});
  tracker.initialize(seq.frames[0], seq.ground_truth[0]);
  tracker.step(seq.frames[1]);
  std::vector<Vector> feats;
  for (int i = 0; i < 37; ++i) {
    feats.push_back(extract_feature(seq.frames[2], {40.0 + i, 60.0, 48, 48}, FeatureMode::kHog));
  }
  const auto one = score_candidates(feats, *tracker.model(), *tracker.classifier(), 1);
  const auto many = score_candidates(feats, *tracker.model(), *tracker.classifier(), 8);
  for (size_t i = 0; i < feats.size(); ++i) EXPECT_EQ(one[i].psi, many[i].psi);
}

TEST(TrackSequence, SingleFrame) {
  const SyntheticSequence seq = generate_sequence(SynthSpec{});
  const BoundingBox init{40, 60, 48, 48};
  const TrackResult r = track_sequence(std::span(seq.frames.data(), 1), init, TrackerConfig{});
  ASSERT_EQ(r.boxes.size(), 1u);
  EXPECT_EQ(r.boxes[0], init);
}

TEST(TrackSequence, StaticTargetWithinOnePixel) {
  SynthSpec spec;
  spec.vx = 0;
  spec.vy = 0;
  spec.noise_std = 0;
  spec.occlusion.reset();
  spec.illumination.reset();
  spec.length = 25;
  // A 48 px box maps 2.4 px onto each patch pixel, which blurs sub-pixel
  // differences; 32 px keeps the 1 px bound meaningful.
  spec.initial_box = {100, 80, 32, 32};
  const SyntheticSequence seq = generate_sequence(spec);
  const TrackResult r = track_sequence(seq.frames, seq.ground_truth[0], TrackerConfig{});
  ASSERT_EQ(r.boxes.size(), seq.frames.size());
  for (size_t t = 0; t < r.boxes.size(); ++t) {
    EXPECT_LE(center_error(r.boxes[t], seq.ground_truth[t]), 1.0) << "frame " << t;
    EXPECT_TRUE(r.boxes[t].valid());
  }
  EXPECT_EQ(r.failure_count, 0);
}

TEST(TrackSequence, SameSeedSameBoxes) {
  SynthSpec spec;
  spec.length = 15;
  const SyntheticSequence seq = generate_sequence(spec);
  TrackerConfig cfg;
  cfg.seed = 9;
  const TrackResult a = track_sequence(seq.frames, seq.ground_truth[0], cfg);
  cfg.workers = 4;
  const TrackResult b = track_sequence(seq.frames, seq.ground_truth[0], cfg);
  EXPECT_EQ(a.boxes, b.boxes);
}

}  // namespace
}  // namespace oet
