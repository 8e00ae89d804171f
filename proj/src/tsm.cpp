#include "uboco/tsm.hpp"

#include "binary_io.hpp"
#include "uboco/error.hpp"

#include <cmath>

namespace uboco {

namespace {
constexpr std::string_view kTsmMagic = "UBTM";
constexpr std::uint32_t kTsmVersion = 1;
}  // namespace

Tsm build_tsm(const FeatureSequence& seq, SimilarityMode mode) {
  validate(seq);
  return build_tsm(seq.data, mode);
}

void render_tsm_pgm(const Tsm& tsm, const std::filesystem::path& path) {
  const auto n = tsm.size();
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const long px = std::lround((tsm.values(i, j) + 1.0) / 2.0 * 255.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(px, 0L, 255L))));
    }
  }
  detail::write_file(path, out);
}

void save_tsm_raw(const Tsm& tsm, const std::filesystem::path& path) {
  std::string out;
  out.append(kTsmMagic);
  detail::put_u32(out, kTsmVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(tsm.size()));
  for (Eigen::Index i = 0; i < tsm.size(); ++i)
    for (Eigen::Index j = 0; j < tsm.size(); ++j) detail::put_f64(out, tsm.values(i, j));
  detail::write_file(path, out);
}

Tsm load_tsm_raw(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  detail::ByteReader in(bytes, path.string());
  in.expect_magic(kTsmMagic);
  if (in.u32() != kTsmVersion) throw FormatError(path.string() + ": unsupported version");
  const std::uint32_t n = in.u32();
  Tsm tsm;
  tsm.values.resize(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) tsm.values(i, j) = in.f64();
  in.expect_end();
  return tsm;
}

}  // namespace uboco
