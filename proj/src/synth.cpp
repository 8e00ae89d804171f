#include "uboco/synth.hpp"

#include "uboco/error.hpp"
#include "uboco/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>

namespace uboco {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSharedStream = 0x5eed0000ULL;
constexpr double kMaxAdjacentCosine = 0.5;

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Eigen::RowVectorXd unit_vector(int dim, Rng& rng) {
  Eigen::RowVectorXd v = gaussian(1, dim, rng);
  while (v.norm() < 1e-6) v = gaussian(1, dim, rng);
  return v / v.norm();
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Segment lengths >= min_len summing to total.
std::vector<int> draw_lengths(int total, int count, int min_len, Rng& rng) {
  const int slack = total - count * min_len;
  std::vector<int> cuts;
  for (int k = 0; k < count - 1; ++k) cuts.push_back(uniform_int(rng, 0, slack));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> lengths;
  int prev = 0;
  for (int c : cuts) {
    lengths.push_back(min_len + c - prev);
    prev = c;
  }
  lengths.push_back(min_len + slack - prev);
  return lengths;
}

BoundaryList jitter(const BoundaryList& truth, int length, Rng& rng) {
  BoundaryList out;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const int shifted = truth[k] + (uniform_int(rng, 0, 1) ? 1 : -1);
    const int lo = out.empty() ? 1 : out.back() + 1;
    const int hi = k + 1 < truth.size() ? truth[k + 1] - 1 : length - 1;
    out.push_back(shifted >= lo && shifted <= hi ? shifted : truth[k]);
  }
  return out;
}

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.num_videos < 0) throw DomainError("synth: num_videos must be >= 0");
  if (cfg.length_min < 2 || cfg.length_max < cfg.length_min) throw DomainError("synth: invalid length range");
  if (cfg.segments_min < 1 || cfg.segments_max < cfg.segments_min) throw DomainError("synth: invalid segment range");
  if (cfg.min_segment_len < 1) throw DomainError("synth: min_segment_len must be >= 1");
  if (static_cast<long>(cfg.min_segment_len) * cfg.segments_max > cfg.length_min)
    throw DomainError("synth: min_segment_len * segments_max exceeds length_min");
  if (cfg.distractor_rank < 0 || cfg.dim < cfg.distractor_rank + 1) throw DomainError("synth: need dim >= rank + 1");
  if (cfg.noise_sigma < 0 || cfg.distractor_weight < 0) throw DomainError("synth: sigma and lambda must be >= 0");
  if (!(cfg.distractor_smoothness >= 0 && cfg.distractor_smoothness < 1))
    throw DomainError("synth: distractor smoothness must be in [0, 1)");
  if (cfg.annotators < 1) throw DomainError("synth: need at least one annotator");
}

SynthShared make_shared_components(const SynthConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, {kSharedStream}));
  SynthShared shared;
  if (cfg.distractor_rank > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(cfg.dim, cfg.distractor_rank, rng));
    shared.distractor_basis = qr.householderQ() * Eigen::MatrixXd::Identity(cfg.dim, cfg.distractor_rank);
  } else {
    shared.distractor_basis = Eigen::MatrixXd::Zero(cfg.dim, 0);
  }
  // Well conditioned but far from orthogonal, so cosines change under mixing.
  while (true) {
    shared.mixing = Eigen::MatrixXd::Identity(cfg.dim, cfg.dim) + gaussian(cfg.dim, cfg.dim, rng) / std::sqrt(cfg.dim);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shared.mixing);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 0.05 * s(0)) break;
  }
  return shared;
}

std::string synth_video_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "vid_%05d", index);
  return buf;
}

SynthVideo generate_video(const SynthConfig& cfg, int index) {
  validate(cfg);
  return generate_video(cfg, make_shared_components(cfg), index);
}

SynthVideo generate_video(const SynthConfig& cfg, const SynthShared& shared, int index) {
  Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(index)}));
  const int length = uniform_int(rng, cfg.length_min, cfg.length_max);
  const int max_segments = std::min(cfg.segments_max, length / cfg.min_segment_len);
  if (max_segments < cfg.segments_min) throw DomainError("synth: infeasible segment layout");
  const int count = uniform_int(rng, cfg.segments_min, max_segments);
  const std::vector<int> lengths = draw_lengths(length, count, cfg.min_segment_len, rng);

  SynthVideo video;
  video.prototypes.resize(count, cfg.dim);
  for (int s = 0; s < count; ++s) {
    Eigen::RowVectorXd p = unit_vector(cfg.dim, rng);
    while (s > 0 && p.dot(video.prototypes.row(s - 1)) >= kMaxAdjacentCosine) p = unit_vector(cfg.dim, rng);
    video.prototypes.row(s) = p;
  }

  const int rank = cfg.distractor_rank;
  const double rho = cfg.distractor_smoothness;
  const double innovation = std::sqrt(1.0 - rho * rho);
  Eigen::VectorXd walk = gaussian(rank, 1, rng);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd data(length, cfg.dim);
  BoundaryList boundaries;
  int t = 0;
  for (int s = 0; s < count; ++s) {
    if (s > 0) boundaries.push_back(t);
    for (int k = 0; k < lengths[static_cast<std::size_t>(s)]; ++k, ++t) {
      Eigen::RowVectorXd x = video.prototypes.row(s);
      for (int d = 0; d < cfg.dim; ++d) x(d) += cfg.noise_sigma * normal(rng);
      if (rank > 0) {
        if (t > 0)
          for (int r = 0; r < rank; ++r) walk(r) = rho * walk(r) + innovation * normal(rng);
        x += cfg.distractor_weight * (shared.distractor_basis * walk).transpose();
      }
      data.row(t) = x;
    }
  }
  if (cfg.mixing) data = data * shared.mixing.transpose();
  data = data.cast<float>().cast<double>();

  video.features = {synth_video_id(index), std::move(data)};
  video.annotation.video_id = video.features.video_id;
  video.annotation.length = length;
  video.annotation.annotators.push_back(boundaries);
  for (int a = 1; a < cfg.annotators; ++a) video.annotation.annotators.push_back(jitter(boundaries, length, rng));
  return video;
}

std::vector<SynthVideo> generate_corpus(const SynthConfig& cfg) {
  validate(cfg);
  const SynthShared shared = make_shared_components(cfg);
  std::vector<SynthVideo> videos;
  videos.reserve(static_cast<std::size_t>(cfg.num_videos));
  for (int i = 0; i < cfg.num_videos; ++i) videos.push_back(generate_video(cfg, shared, i));
  return videos;
}

AnnotationSet annotations_of(const std::vector<SynthVideo>& videos) {
  AnnotationSet out;
  for (const auto& v : videos) out.emplace(v.annotation.video_id, v.annotation);
  return out;
}

std::vector<FeatureSequence> features_of(const std::vector<SynthVideo>& videos) {
  std::vector<FeatureSequence> out;
  out.reserve(videos.size());
  for (const auto& v : videos) out.push_back(v.features);
  return out;
}

DatasetManifest generate_dataset(const SynthConfig& cfg, const fs::path& dir) {
  const auto videos = generate_corpus(cfg);
  std::error_code ec;
  fs::create_directories(dir / "features", ec);
  if (ec) throw IoError((dir / "features").string() + ": " + ec.message());
  DatasetManifest manifest;
  for (const auto& v : videos) {
    const fs::path file = dir / "features" / (v.features.video_id + ".bin");
    save_features(v.features, file, FeatureFormat::binary);
    manifest.entries[v.features.video_id] = {file, true};
  }
  save_annotations(annotations_of(videos), dir / "annotations.json");
  save_manifest(manifest, dir / "manifest.json");
  return manifest;
}

}  // namespace uboco
