#include <benchmark/benchmark.h>

#include <random>

#include "oet/diagnostics.hpp"
#include "oet/embedding.hpp"
#include "oet/features.hpp"
#include "oet/representation.hpp"
#include "oet/synth.hpp"
#include "oet/tracker.hpp"

namespace {

using namespace oet;

void BM_SingularValueShrinkage(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Matrix m = random_gaussian(576, 98, rng);
  for (auto _ : state) benchmark::DoNotOptimize(singular_value_shrinkage(1.0, m));
}
BENCHMARK(BM_SingularValueShrinkage);

void BM_LearnEmbeddingRpca(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Matrix x = random_low_rank(100, 50, 3, rng) + random_sparse(100, 50, 0.05, 5, 10, rng);
  const Matrix identity = Matrix::Identity(50, 50);
  for (auto _ : state) benchmark::DoNotOptimize(learn_embedding(x, identity, SolverConfig{}));
}
BENCHMARK(BM_LearnEmbeddingRpca)->Unit(benchmark::kMillisecond);

// One relearn as the tracker does it: 50 targets + 48 background HOG vectors.
void BM_LearnEmbeddingTracker(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Matrix x = random_gaussian(kHogLength, 98, rng);
  const LabelMatrix y = LabelMatrix::from_counts(50, 48);
  for (auto _ : state) benchmark::DoNotOptimize(learn_embedding(TrainingSet{x, y}, SolverConfig{}));
}
BENCHMARK(BM_LearnEmbeddingTracker)->Unit(benchmark::kMillisecond);

void BM_Hog(benchmark::State& state) {
  const SyntheticSequence seq = generate_sequence(SynthSpec{.length = 1});
  const Matrix patch = crop_resize(seq.frames[0], seq.ground_truth[0]);
  for (auto _ : state) benchmark::DoNotOptimize(hog(patch));
}
BENCHMARK(BM_Hog);

void BM_ScoreCandidates(benchmark::State& state) {
  SynthSpec spec;
  spec.length = 3;
  const SyntheticSequence seq = generate_sequence(spec);
  Tracker tracker(TrackerConfig{});
  tracker.initialize(seq.frames[0], seq.ground_truth[0]);
  tracker.step(seq.frames[1]);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> jitter(0.0, 2.0);
  std::vector<Vector> feats;
  const BoundingBox gt = seq.ground_truth[2];
  for (int i = 0; i < 400; ++i) {
    feats.push_back(extract_feature(seq.frames[2], {gt.x + jitter(rng), gt.y + jitter(rng), gt.w, gt.h},
                                    FeatureMode::kHog));
  }
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        score_candidates(feats, *tracker.model(), *tracker.classifier(), workers));
  }
}
BENCHMARK(BM_ScoreCandidates)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
