#ifndef UBOCO_TSM_HPP
#define UBOCO_TSM_HPP

#include "uboco/features.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <filesystem>

namespace uboco {

enum class SimilarityMode { cosine, neg_l2 };

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Norm floor for cosine similarity; rows below it are treated as zero vectors.
template <typename Scalar>
inline constexpr Scalar kNormEpsilon = Scalar(1e-12);

/// Temporal self-similarity matrix. Symmetric bit-for-bit.
template <typename Scalar>
struct BasicTsm {
  SimilarityMode mode = SimilarityMode::cosine;
  MatrixX<Scalar> values;

  Eigen::Index size() const { return values.rows(); }
};

using Tsm = BasicTsm<double>;

/// Row-wise x / max(|x|, eps).
template <typename Derived>
MatrixX<typename Derived::Scalar> normalize_rows(const Eigen::MatrixBase<Derived>& frames) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> z = frames;
  for (Eigen::Index i = 0; i < z.rows(); ++i) z.row(i) /= std::max(z.row(i).norm(), kNormEpsilon<Scalar>);
  return z;
}

/// Builds the L x L similarity matrix of the rows of `frames`.
///
/// cosine: z_i . z_j on rows normalized by max(|x_i|, eps), diagonal fixed at 1
/// and entries clamped to [-1, 1]. neg_l2: -|x_i - x_j|, diagonal 0.
/// Each unordered pair is evaluated once and mirrored, so the result is exactly symmetric.
template <typename Derived>
BasicTsm<typename Derived::Scalar> build_tsm(const Eigen::MatrixBase<Derived>& frames,
                                             SimilarityMode mode = SimilarityMode::cosine) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = frames.rows();
  BasicTsm<Scalar> tsm;
  tsm.mode = mode;
  tsm.values.resize(n, n);
  if (mode == SimilarityMode::cosine) {
    const MatrixX<Scalar> z = normalize_rows(frames);
    const MatrixX<Scalar> gram = z * z.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      tsm.values(i, i) = Scalar(1);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Scalar v = std::clamp(gram(i, j), Scalar(-1), Scalar(1));
        tsm.values(i, j) = v;
        tsm.values(j, i) = v;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      tsm.values(i, i) = Scalar(0);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Scalar v = -(frames.row(i) - frames.row(j)).norm();
        tsm.values(i, j) = v;
        tsm.values(j, i) = v;
      }
    }
  }
  return tsm;
}

/// Validates the sequence, then builds its TSM.
Tsm build_tsm(const FeatureSequence& seq, SimilarityMode mode = SimilarityMode::cosine);

/// Binary PGM (P5), pixel = round((v + 1) / 2 * 255) clamped to [0, 255].
void render_tsm_pgm(const Tsm& tsm, const std::filesystem::path& path);

/// "UBTM", u32 version (=1), u32 L, then L*L little-endian float64, row-major.
void save_tsm_raw(const Tsm& tsm, const std::filesystem::path& path);
Tsm load_tsm_raw(const std::filesystem::path& path);

}  // namespace uboco

#endif  // UBOCO_TSM_HPP
