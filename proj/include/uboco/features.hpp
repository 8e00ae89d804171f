#ifndef UBOCO_FEATURES_HPP
#define UBOCO_FEATURES_HPP

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace uboco {

/// Per-frame features of one video, frame-major (row i = frame i).
struct FeatureSequence {
  std::string video_id;
  Eigen::MatrixXd data;

  Eigen::Index num_frames() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }

  bool operator==(const FeatureSequence& other) const {
    return video_id == other.video_id && data.rows() == other.data.rows() &&
           data.cols() == other.data.cols() && data == other.data;
  }
};

/// Throws DomainError unless L >= 2, D >= 1 and every entry is finite.
void validate(const FeatureSequence& seq);

/// Boundary index b splits frames b-1 and b; b is the first frame of the new segment.
using BoundaryList = std::vector<int>;

struct BoundaryAnnotation {
  std::string video_id;
  int length = 0;
  std::vector<BoundaryList> annotators;
};

/// Throws DomainError unless every list is strictly increasing within [1, L-1].
void validate_boundaries(const BoundaryList& boundaries, int length);
void validate(const BoundaryAnnotation& annotation);

using AnnotationSet = std::map<std::string, BoundaryAnnotation>;

enum class FeatureFormat { binary, csv };

/// Picks csv for a ".csv" extension, binary otherwise.
FeatureFormat format_from_path(const std::filesystem::path& path);

/// Binary layout: "UBFV", u32 version (=1), u32 L, u32 D, then L*D float32,
/// all little-endian, frame-major. The video id is taken from the file stem.
FeatureSequence load_features(const std::filesystem::path& path, FeatureFormat format);
FeatureSequence load_features(const std::filesystem::path& path);

/// Binary output narrows to float32; values already representable in float32
/// survive a round trip bit-exactly. CSV output uses shortest round-trip digits.
void save_features(const FeatureSequence& seq, const std::filesystem::path& path, FeatureFormat format);

/// Top-level keys "tool_version", "effective_config" and "seed" carry run
/// metadata and are skipped by the annotation and manifest loaders.
AnnotationSet load_annotations(const std::filesystem::path& path);
void save_annotations(const AnnotationSet& annotations, const std::filesystem::path& path);

struct ManifestEntry {
  std::filesystem::path features;  // absolute after load; relative to the manifest on disk
  bool annotated = false;
};

struct DatasetManifest {
  std::map<std::string, ManifestEntry> entries;
};

/// Resolves relative feature paths against the manifest's directory and
/// checks that each file exists.
DatasetManifest load_manifest(const std::filesystem::path& path);
/// Paths are written relative to the manifest's directory when possible.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Loads every feature file of a manifest, ordered by video id.
std::vector<FeatureSequence> load_corpus(const DatasetManifest& manifest);

}  // namespace uboco

#endif  // UBOCO_FEATURES_HPP
