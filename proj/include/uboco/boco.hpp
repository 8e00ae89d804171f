#ifndef UBOCO_BOCO_HPP
#define UBOCO_BOCO_HPP

#include "uboco/error.hpp"
#include "uboco/features.hpp"
#include "uboco/tsm.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstdlib>
#include <filesystem>

namespace uboco {

/// Pair labels for the boundary contrastive loss: +1 marks a positive pair
/// (same segment, |i - j| <= gap, i != j), -1 a negative pair (different
/// segments, |i - j| <= gap), 0 everything else. Symmetric by construction.
struct BocoMask {
  using Labels = Eigen::Matrix<signed char, Eigen::Dynamic, Eigen::Dynamic>;

  int gap = 0;
  Labels labels;
  Eigen::Index num_positive = 0;
  Eigen::Index num_negative = 0;

  Eigen::Index size() const { return labels.rows(); }
  bool positive(Eigen::Index i, Eigen::Index j) const { return labels(i, j) > 0; }
  bool negative(Eigen::Index i, Eigen::Index j) const { return labels(i, j) < 0; }
};

/// Segment id of every frame (number of boundaries at or before it).
std::vector<int> segment_ids(int length, const BoundaryList& boundaries);

BocoMask build_mask(int length, const BoundaryList& boundaries, int gap);

/// PGM with 255 for positive pairs, 0 for negative pairs and 128 elsewhere.
void save_mask_pgm(const BocoMask& mask, const std::filesystem::path& path);

template <typename Scalar>
struct BasicLossValue {
  Scalar loss = 0;
  MatrixX<Scalar> grad_tsm;
};

using LossValue = BasicLossValue<double>;

namespace detail {
inline void check_mask(Eigen::Index tsm_size, const BocoMask& mask) {
  if (mask.size() != tsm_size) throw DomainError("BoCo mask size does not match TSM");
}
}  // namespace detail

/// mean over negative pairs - mean over positive pairs; an empty set has mean 0.
template <typename Derived>
typename Derived::Scalar boco_loss(const Eigen::MatrixBase<Derived>& tsm, const BocoMask& mask) {
  using Scalar = typename Derived::Scalar;
  detail::check_mask(tsm.rows(), mask);
  Scalar pos = 0, neg = 0;
  for (Eigen::Index j = 0; j < mask.size(); ++j) {
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
      const signed char l = mask.labels(i, j);
      if (l > 0)
        pos += tsm(i, j);
      else if (l < 0)
        neg += tsm(i, j);
    }
  }
  const Scalar neg_mean = mask.num_negative ? neg / Scalar(mask.num_negative) : Scalar(0);
  const Scalar pos_mean = mask.num_positive ? pos / Scalar(mask.num_positive) : Scalar(0);
  return neg_mean - pos_mean;
}

/// d loss / d tsm: 1/|N| on negative pairs, -1/|P| on positive pairs, 0 elsewhere.
template <typename Scalar = double>
MatrixX<Scalar> boco_grad_tsm(const BocoMask& mask) {
  const Scalar gn = mask.num_negative ? Scalar(1) / Scalar(mask.num_negative) : Scalar(0);
  const Scalar gp = mask.num_positive ? -Scalar(1) / Scalar(mask.num_positive) : Scalar(0);
  return mask.labels.unaryExpr([&](signed char l) { return l > 0 ? gp : (l < 0 ? gn : Scalar(0)); });
}

template <typename Scalar>
BasicLossValue<Scalar> boco_loss_and_grad(const BasicTsm<Scalar>& tsm, const BocoMask& mask) {
  return {boco_loss(tsm.values, mask), boco_grad_tsm<Scalar>(mask)};
}

/// Back-propagates a symmetric TSM gradient through the cosine TSM to the rows
/// it was built from. With z_i = x_i / max(|x_i|, eps):
///   dL/dx_i = (I - z_i z_i^T) (2 sum_{j != i} G_ij z_j) / max(|x_i|, eps)
template <typename DerivedX, typename DerivedG>
MatrixX<typename DerivedX::Scalar> tsm_grad_to_features(const Eigen::MatrixBase<DerivedX>& frames,
                                                        const Eigen::MatrixBase<DerivedG>& grad_tsm) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = frames.rows();
  if (grad_tsm.rows() != n || grad_tsm.cols() != n)
    throw DomainError("TSM gradient is " + std::to_string(grad_tsm.rows()) + "x" + std::to_string(grad_tsm.cols()) +
                      ", features have " + std::to_string(n) + " rows");
  VectorX<Scalar> norms(n);
  MatrixX<Scalar> z(n, frames.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    norms(i) = std::max(frames.row(i).norm(), kNormEpsilon<Scalar>);
    z.row(i) = frames.row(i) / norms(i);
  }
  MatrixX<Scalar> g = grad_tsm;
  g.diagonal().setZero();
  MatrixX<Scalar> out = Scalar(2) * (g * z);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar radial = z.row(i).dot(out.row(i));
    out.row(i) = (out.row(i) - radial * z.row(i)) / norms(i);
  }
  return out;
}

}  // namespace uboco

#endif  // UBOCO_BOCO_HPP
