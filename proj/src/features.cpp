#include "uboco/features.hpp"

#include "binary_io.hpp"
#include "uboco/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace uboco {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kFeatureMagic = "UBFV";

bool is_run_metadata(const std::string& key) {
  return key == "tool_version" || key == "effective_config" || key == "seed";
}
constexpr std::uint32_t kFeatureVersion = 1;

FeatureSequence load_binary(const fs::path& path) {
  const std::string bytes = detail::read_file(path);
  detail::ByteReader in(bytes, path.string());
  in.expect_magic(kFeatureMagic);
  if (in.u32() != kFeatureVersion) throw FormatError(path.string() + ": unsupported version");
  const std::uint32_t rows = in.u32();
  const std::uint32_t cols = in.u32();
  if (rows < 2 || cols < 1) throw DomainError(path.string() + ": need L >= 2 and D >= 1");
  const std::uint64_t expected = 16ULL + 4ULL * rows * cols;
  if (bytes.size() != expected) throw FormatError(path.string() + ": payload size does not match header");
  FeatureSequence seq{path.stem().string(), Eigen::MatrixXd(rows, cols)};
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) seq.data(i, j) = static_cast<double>(in.f32());
  return seq;
}

FeatureSequence load_csv(const fs::path& path) {
  const std::string text = detail::read_file(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec == std::errc::result_out_of_range) throw DomainError(path.string() + ":" + std::to_string(line_no) + ": value out of range");
      if (ec != std::errc()) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
      row.push_back(v);
      p = next;
      if (p == end) break;
      if (*p != ',') throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected ','");
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw DomainError(path.string() + ": need L >= 2 frames");
  FeatureSequence seq{path.stem().string(), Eigen::MatrixXd(rows.size(), rows.front().size())};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) seq.data(i, j) = rows[i][j];
  return seq;
}

std::string format_csv(const Eigen::MatrixXd& data) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out.push_back(',');
      auto res = std::to_chars(buf, buf + sizeof(buf), data(i, j));
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

json read_json(const fs::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

void validate(const FeatureSequence& seq) {
  if (seq.num_frames() < 2) throw DomainError("features '" + seq.video_id + "': need L >= 2");
  if (seq.dim() < 1) throw DomainError("features '" + seq.video_id + "': need D >= 1");
  if (!seq.data.allFinite()) throw DomainError("features '" + seq.video_id + "': non-finite value");
}

void validate_boundaries(const BoundaryList& boundaries, int length) {
  int prev = 0;
  for (int b : boundaries) {
    if (b < 1 || b > length - 1)
      throw DomainError("boundary " + std::to_string(b) + " outside [1, " + std::to_string(length - 1) + "]");
    if (b <= prev) throw DomainError("boundary list not strictly increasing at " + std::to_string(b));
    prev = b;
  }
}

void validate(const BoundaryAnnotation& annotation) {
  if (annotation.length < 2) throw DomainError("annotation '" + annotation.video_id + "': length must be >= 2");
  if (annotation.annotators.empty()) throw DomainError("annotation '" + annotation.video_id + "': no annotators");
  for (const auto& list : annotation.annotators) {
    try {
      validate_boundaries(list, annotation.length);
    } catch (const DomainError& e) {
      throw DomainError("annotation '" + annotation.video_id + "': " + e.what());
    }
  }
}

FeatureFormat format_from_path(const fs::path& path) {
  return path.extension() == ".csv" ? FeatureFormat::csv : FeatureFormat::binary;
}

FeatureSequence load_features(const fs::path& path, FeatureFormat format) {
  FeatureSequence seq = format == FeatureFormat::binary ? load_binary(path) : load_csv(path);
  try {
    validate(seq);
  } catch (const DomainError& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
  return seq;
}

FeatureSequence load_features(const fs::path& path) { return load_features(path, format_from_path(path)); }

void save_features(const FeatureSequence& seq, const fs::path& path, FeatureFormat format) {
  validate(seq);
  if (format == FeatureFormat::csv) {
    detail::write_file(path, format_csv(seq.data));
    return;
  }
  std::string out;
  out.reserve(16 + 4 * seq.data.size());
  out.append(kFeatureMagic);
  detail::put_u32(out, kFeatureVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(seq.num_frames()));
  detail::put_u32(out, static_cast<std::uint32_t>(seq.dim()));
  for (Eigen::Index i = 0; i < seq.num_frames(); ++i)
    for (Eigen::Index j = 0; j < seq.dim(); ++j) detail::put_f32(out, static_cast<float>(seq.data(i, j)));
  detail::write_file(path, out);
}

AnnotationSet load_annotations(const fs::path& path) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw FormatError(path.string() + ": expected a JSON object");
  AnnotationSet result;
  try {
    for (const auto& [id, entry] : doc.items()) {
      if (is_run_metadata(id)) continue;
      BoundaryAnnotation ann;
      ann.video_id = id;
      ann.length = entry.at("length").get<int>();
      ann.annotators = entry.at("annotators").get<std::vector<BoundaryList>>();
      validate(ann);
      result.emplace(id, std::move(ann));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return result;
}

void save_annotations(const AnnotationSet& annotations, const fs::path& path) {
  json doc = json::object();
  for (const auto& [id, ann] : annotations) {
    validate(ann);
    doc[id] = {{"length", ann.length}, {"annotators", ann.annotators}};
  }
  detail::write_file(path, doc.dump(2) + "\n");
}

DatasetManifest load_manifest(const fs::path& path) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw FormatError(path.string() + ": expected a JSON object");
  DatasetManifest manifest;
  const fs::path base = path.parent_path();
  try {
    for (const auto& [id, entry] : doc.items()) {
      if (is_run_metadata(id)) continue;
      ManifestEntry e;
      fs::path p = entry.at("features").get<std::string>();
      e.features = p.is_absolute() ? p : base / p;
      e.annotated = entry.value("annotated", false);
      if (!fs::exists(e.features)) throw IoError(path.string() + ": missing feature file " + e.features.string());
      manifest.entries.emplace(id, std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  json doc = json::object();
  const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  for (const auto& [id, entry] : manifest.entries) {
    fs::path p = entry.features;
    std::error_code ec;
    auto rel = fs::relative(fs::absolute(p), fs::absolute(base), ec);
    if (!ec && !rel.empty()) p = rel;
    doc[id] = {{"features", p.generic_string()}, {"annotated", entry.annotated}};
  }
  detail::write_file(path, doc.dump(2) + "\n");
}

std::vector<FeatureSequence> load_corpus(const DatasetManifest& manifest) {
  std::vector<FeatureSequence> corpus;
  corpus.reserve(manifest.entries.size());
  for (const auto& [id, entry] : manifest.entries) {
    FeatureSequence seq = load_features(entry.features);
    seq.video_id = id;
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

}  // namespace uboco
