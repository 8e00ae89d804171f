#ifndef UBOCO_SYNTH_HPP
#define UBOCO_SYNTH_HPP

#include "uboco/features.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace uboco {

/// Piecewise-stationary corpus with a shared low-rank smooth distractor.
struct SynthConfig {
  int num_videos = 100;
  int length_min = 100;
  int length_max = 160;
  int segments_min = 2;
  int segments_max = 6;
  int min_segment_len = 10;
  int dim = 16;
  double noise_sigma = 0.0;
  double distractor_weight = 0.0;
  int distractor_rank = 4;
  double distractor_smoothness = 0.995;  // AR(1) coefficient of the distractor walk
  bool mixing = false;
  int annotators = 1;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

struct SynthVideo {
  FeatureSequence features;
  BoundaryAnnotation annotation;  // annotator 0 is the exact layout
  Eigen::MatrixXd prototypes;     // one unit row per segment
};

/// Corpus-wide pieces shared by every video of one seed.
struct SynthShared {
  Eigen::MatrixXd distractor_basis;  // D x r, orthonormal columns
  Eigen::MatrixXd mixing;            // D x D, invertible
};

SynthShared make_shared_components(const SynthConfig& cfg);

std::string synth_video_id(int index);

/// Frame t of segment s: p_s + sigma * eta_t + lambda * B w_t, then M applied
/// when mixing is on. Values are rounded to float32 so they survive the binary
/// feature format unchanged.
SynthVideo generate_video(const SynthConfig& cfg, int index);
SynthVideo generate_video(const SynthConfig& cfg, const SynthShared& shared, int index);

std::vector<SynthVideo> generate_corpus(const SynthConfig& cfg);

/// Writes features/<id>.bin, annotations.json and manifest.json under `dir`.
DatasetManifest generate_dataset(const SynthConfig& cfg, const std::filesystem::path& dir);

/// The corpus' features and annotations side by side, ordered by video id.
AnnotationSet annotations_of(const std::vector<SynthVideo>& videos);
std::vector<FeatureSequence> features_of(const std::vector<SynthVideo>& videos);

}  // namespace uboco

#endif  // UBOCO_SYNTH_HPP
