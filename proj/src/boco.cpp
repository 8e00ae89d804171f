#include "uboco/boco.hpp"

#include "binary_io.hpp"

namespace uboco {

std::vector<int> segment_ids(int length, const BoundaryList& boundaries) {
  std::vector<int> seg(static_cast<std::size_t>(length));
  int id = 0;
  std::size_t next = 0;
  for (int t = 0; t < length; ++t) {
    while (next < boundaries.size() && boundaries[next] <= t) {
      ++id;
      ++next;
    }
    seg[static_cast<std::size_t>(t)] = id;
  }
  return seg;
}

BocoMask build_mask(int length, const BoundaryList& boundaries, int gap) {
  if (length < 1) throw DomainError("BoCo mask: length must be positive");
  if (gap < 0) throw DomainError("BoCo mask: gap must be non-negative");
  validate_boundaries(boundaries, length);
  const auto seg = segment_ids(length, boundaries);
  BocoMask mask{gap, BocoMask::Labels::Zero(length, length), 0, 0};
  for (int i = 0; i < length; ++i) {
    const int hi = std::min(length - 1, i + gap);
    for (int j = std::max(0, i - gap); j <= hi; ++j) {
      if (i == j) continue;
      if (seg[static_cast<std::size_t>(i)] == seg[static_cast<std::size_t>(j)]) {
        mask.labels(i, j) = 1;
        ++mask.num_positive;
      } else {
        mask.labels(i, j) = -1;
        ++mask.num_negative;
      }
    }
  }
  return mask;
}

void save_mask_pgm(const BocoMask& mask, const std::filesystem::path& path) {
  const auto n = mask.size();
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const signed char l = mask.labels(i, j);
      out.push_back(static_cast<char>(static_cast<unsigned char>(l > 0 ? 255 : (l < 0 ? 0 : 128))));
    }
  }
  detail::write_file(path, out);
}

}  // namespace uboco
