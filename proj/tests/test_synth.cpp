#include "temp_dir.hpp"
#include "uboco/error.hpp"
#include "uboco/eval.hpp"
#include "uboco/rtp.hpp"
#include "uboco/synth.hpp"
#include "uboco/tsm.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <set>

using namespace uboco;

namespace {

std::vector<int> segment_of(int length, const BoundaryList& b) {
  std::vector<int> seg(static_cast<std::size_t>(length), 0);
  for (int t = 0; t < length; ++t)
    for (int x : b) seg[static_cast<std::size_t>(t)] += t >= x;
  return seg;
}

std::vector<BoundaryPrediction> detect_raw(const std::vector<SynthVideo>& videos) {
  std::vector<BoundaryPrediction> out;
  for (const auto& v : videos) {
    BoundaryPrediction p = rtp_detect(build_tsm(v.features), RtpConfig{});
    p.video_id = v.features.video_id;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

TEST(Synth, NoiselessTsmIsBlockStructured) {
  SynthConfig cfg;
  cfg.num_videos = 10;
  for (const auto& v : generate_corpus(cfg)) {
    const Tsm tsm = build_tsm(v.features);
    const auto seg = segment_of(static_cast<int>(tsm.size()), v.annotation.annotators[0]);
    for (Eigen::Index i = 0; i < tsm.size(); ++i)
      for (Eigen::Index j = 0; j < tsm.size(); ++j) {
        if (seg[static_cast<std::size_t>(i)] == seg[static_cast<std::size_t>(j)])
          EXPECT_NEAR(tsm.values(i, j), 1.0, 1e-6);
        else if (std::abs(seg[static_cast<std::size_t>(i)] - seg[static_cast<std::size_t>(j)]) == 1)
          EXPECT_LT(tsm.values(i, j), 0.5);
      }
  }
}

TEST(Synth, SameSeedSameVideo) {
  SynthConfig cfg;
  cfg.noise_sigma = 0.2;
  cfg.distractor_weight = 1.0;
  cfg.mixing = true;
  cfg.seed = 5;
  const SynthVideo a = generate_video(cfg, 3);
  const SynthVideo b = generate_video(cfg, 3);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.annotation.annotators, b.annotation.annotators);
  cfg.num_videos = 5;
  EXPECT_EQ(generate_corpus(cfg)[3].features, a.features);
}

TEST(Synth, LayoutRespectsMinimumSegmentLength) {
  SynthConfig cfg;
  cfg.num_videos = 60;
  cfg.min_segment_len = 5;
  cfg.length_min = 30;
  cfg.length_max = 80;
  cfg.segments_max = 6;
  for (const auto& v : generate_corpus(cfg)) {
    const BoundaryList& b = v.annotation.annotators[0];
    const int length = static_cast<int>(v.features.num_frames());
    validate_boundaries(b, length);
    int prev = 0;
    for (int x : b) {
      EXPECT_GE(x - prev, 5);
      prev = x;
    }
    EXPECT_GE(length - prev, 5);
    EXPECT_EQ(v.prototypes.rows(), static_cast<Eigen::Index>(b.size() + 1));
    EXPECT_GE(length, 30);
    EXPECT_LE(length, 80);
  }
}

TEST(Synth, AdjacentPrototypesAreDissimilar) {
  SynthConfig cfg;
  cfg.num_videos = 30;
  for (const auto& v : generate_corpus(cfg))
    for (Eigen::Index s = 1; s < v.prototypes.rows(); ++s) {
      EXPECT_NEAR(v.prototypes.row(s).norm(), 1.0, 1e-12);
      EXPECT_LT(v.prototypes.row(s).dot(v.prototypes.row(s - 1)), 0.5);
    }
}

TEST(Synth, DifferentSeedsGiveDifferentLayouts) {
  SynthConfig cfg;
  for (std::uint64_t k = 0; k < 50; ++k) {
    cfg.seed = 2 * k;
    const SynthVideo a = generate_video(cfg, 0);
    cfg.seed = 2 * k + 1;
    const SynthVideo b = generate_video(cfg, 0);
    EXPECT_NE(a.annotation.annotators[0], b.annotation.annotators[0]) << k;
  }
}

TEST(Synth, ExtraAnnotatorsAreJitteredCopies) {
  SynthConfig cfg;
  cfg.annotators = 3;
  cfg.num_videos = 20;
  for (const auto& v : generate_corpus(cfg)) {
    ASSERT_EQ(v.annotation.annotators.size(), 3u);
    const BoundaryList& truth = v.annotation.annotators[0];
    for (std::size_t a = 1; a < 3; ++a) {
      const BoundaryList& j = v.annotation.annotators[a];
      validate_boundaries(j, v.annotation.length);
      ASSERT_EQ(j.size(), truth.size());
      for (std::size_t k = 0; k < j.size(); ++k) EXPECT_LE(std::abs(j[k] - truth[k]), 1);
    }
  }
}

TEST(Synth, SharedComponents) {
  SynthConfig cfg;
  cfg.dim = 10;
  cfg.distractor_rank = 3;
  const SynthShared s = make_shared_components(cfg);
  ASSERT_EQ(s.distractor_basis.rows(), 10);
  ASSERT_EQ(s.distractor_basis.cols(), 3);
  EXPECT_LE((s.distractor_basis.transpose() * s.distractor_basis - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_GT(std::abs(s.mixing.determinant()), 0.0);
}

TEST(Synth, InvalidConfigsAreDomainErrors) {
  SynthConfig cfg;
  cfg.min_segment_len = 30;
  EXPECT_THROW(generate_corpus(cfg), DomainError);
  cfg = SynthConfig{};
  cfg.dim = 4;
  cfg.distractor_rank = 4;
  EXPECT_THROW(generate_corpus(cfg), DomainError);
  cfg = SynthConfig{};
  cfg.noise_sigma = -1;
  EXPECT_THROW(generate_corpus(cfg), DomainError);
}

TEST(Synth, DatasetRoundTrip) {
  TempDir dir;
  SynthConfig cfg;
  cfg.num_videos = 3;
  cfg.noise_sigma = 0.3;
  cfg.distractor_weight = 0.7;
  cfg.mixing = true;
  const DatasetManifest m = generate_dataset(cfg, dir.path());
  EXPECT_EQ(m.entries.size(), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "annotations.json"));
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir / "features"), std::filesystem::directory_iterator()), 3);

  const auto videos = generate_corpus(cfg);
  const auto loaded = load_corpus(load_manifest(dir / "manifest.json"));
  ASSERT_EQ(loaded.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(loaded[k], videos[k].features);
  const AnnotationSet ann = load_annotations(dir / "annotations.json");
  for (const auto& v : videos) EXPECT_EQ(ann.at(v.features.video_id).annotators, v.annotation.annotators);
}

TEST(Synth, UnwritableTargetIsIoError) {
  TempDir dir;
  spit(dir / "file", "x");
  SynthConfig cfg;
  cfg.num_videos = 1;
  EXPECT_THROW(generate_dataset(cfg, dir / "file"), IoError);
}

TEST(Synth, DistractorLowersRawFeatureAccuracy) {
  SynthConfig clean;
  clean.num_videos = 40;
  clean.seed = 1;
  SynthConfig noisy = clean;
  noisy.noise_sigma = 0.1;
  noisy.distractor_weight = 1.0;
  const auto a = generate_corpus(clean);
  const auto b = generate_corpus(noisy);
  for (std::size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a[k].annotation.annotators, b[k].annotation.annotators);
  const double f_clean = f1_at(detect_raw(a), annotations_of(a), 0.05).f1;
  const double f_noisy = f1_at(detect_raw(b), annotations_of(b), 0.05).f1;
  EXPECT_EQ(f_clean, 1.0);
  EXPECT_LE(f_noisy, f_clean - 0.2);
}
