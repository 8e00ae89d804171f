#ifndef UBOCO_SCORING_HPP
#define UBOCO_SCORING_HPP

#include "uboco/error.hpp"
#include "uboco/tsm.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace uboco {

/// K x K zero-sum boundary pattern. Same-side quadrants weigh +1/(2c^2),
/// cross quadrants -1/(2c^2), and the centre row and column are zero, so the
/// response is mean(same-side similarity) - mean(cross-side similarity).
template <typename Scalar>
struct BasicContrastiveKernel {
  int size = 0;
  MatrixX<Scalar> weights;

  int center() const { return (size - 1) / 2; }
};

using ContrastiveKernel = BasicContrastiveKernel<double>;

template <typename Scalar = double>
BasicContrastiveKernel<Scalar> make_kernel(int size) {
  if (size < 3 || size % 2 == 0) throw DomainError("kernel size must be odd and >= 3, got " + std::to_string(size));
  const int c = (size - 1) / 2;
  const Scalar w = Scalar(1) / Scalar(2 * c * c);
  BasicContrastiveKernel<Scalar> kernel{size, MatrixX<Scalar>::Zero(size, size)};
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      if (u == c || v == c) continue;
      kernel.weights(u, v) = ((u < c) == (v < c)) ? w : -w;
    }
  }
  return kernel;
}

/// How the kernel treats positions near the edges of the scored interval.
///   zero: the sub-matrix is padded with 0, so nothing outside [begin, end)
///         is seen (the standard mode).
///   none: no local padding; the window reads the whole matrix across the
///         interval edges and is clipped only at the matrix border, where each
///         sign group's weights are rescaled over the entries that remain
///         (the no-padding ablation).
enum class Padding { zero, none };

/// Scores for the half-open global interval [begin, end); scores[i - begin] is frame i.
template <typename Scalar>
struct BasicBoundaryScores {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
  VectorX<Scalar> scores;

  Eigen::Index size() const { return end - begin; }
  Scalar at(Eigen::Index frame) const { return scores(frame - begin); }
};

using BoundaryScores = BasicBoundaryScores<double>;

namespace detail {

inline void check_interval(Eigen::Index begin, Eigen::Index end, Eigen::Index length) {
  if (begin < 0 || end > length || begin >= end)
    throw DomainError("invalid interval [" + std::to_string(begin) + ", " + std::to_string(end) + ") for L=" +
                      std::to_string(length));
}

/// Kernel response centred on global frame `frame`, restricted to [begin, end).
template <typename Derived, typename Scalar = typename Derived::Scalar>
Scalar kernel_response(const Eigen::MatrixBase<Derived>& tsm, Eigen::Index begin, Eigen::Index end,
                       Eigen::Index frame, const BasicContrastiveKernel<Scalar>& kernel, Padding padding) {
  const Eigen::Index c = kernel.center();
  if (padding == Padding::none) {
    begin = 0;
    end = tsm.rows();
  }
  const Eigen::Index lo = std::max(begin, frame - c);
  const Eigen::Index hi = std::min(end - 1, frame + c);
  Scalar pos = 0;
  Scalar neg = 0;
  for (Eigen::Index r = lo; r <= hi; ++r) {
    const Eigen::Index u = r - frame + c;
    for (Eigen::Index q = lo; q <= hi; ++q) {
      const Scalar w = kernel.weights(u, q - frame + c);
      if (w > 0)
        pos += w * tsm(r, q);
      else if (w < 0)
        neg += w * tsm(r, q);
    }
  }
  if (padding == Padding::zero) return pos + neg;

  // Same-side pairs come from the before x before and after x after blocks.
  const Eigen::Index before = frame - lo;
  const Eigen::Index after = hi - frame;
  const Eigen::Index full_pos = 2 * c * c;
  const Eigen::Index valid_pos = before * before + after * after;
  const Eigen::Index valid_neg = 2 * before * after;
  // At the first and last frame no cross-side pair exists, so there is nothing to contrast.
  if (valid_pos == 0 || valid_neg == 0) return Scalar(0);
  return pos * (Scalar(full_pos) / Scalar(valid_pos)) + neg * (Scalar(full_pos) / Scalar(valid_neg));
}

inline bool fully_interior(Eigen::Index frame, Eigen::Index begin, Eigen::Index end, int center) {
  return frame - begin >= center && end - 1 - frame >= center;
}

/// Whether the score of `frame` inside [begin, end) equals its full-matrix score.
inline bool context_free(Eigen::Index frame, Eigen::Index begin, Eigen::Index end, int center, Padding padding) {
  return padding == Padding::none || fully_interior(frame, begin, end, center);
}

}  // namespace detail

/// Diagonal convolution of the sub-matrix tsm[begin, end) x [begin, end) with the kernel.
template <typename Derived, typename Scalar = typename Derived::Scalar>
BasicBoundaryScores<Scalar> boundary_scores(const Eigen::MatrixBase<Derived>& tsm, Eigen::Index begin,
                                            Eigen::Index end, const BasicContrastiveKernel<Scalar>& kernel,
                                            Padding padding = Padding::zero) {
  detail::check_interval(begin, end, tsm.rows());
  BasicBoundaryScores<Scalar> out{begin, end, VectorX<Scalar>(end - begin)};
  for (Eigen::Index i = begin; i < end; ++i)
    out.scores(i - begin) = detail::kernel_response(tsm, begin, end, i, kernel, padding);
  return out;
}

template <typename Scalar>
BasicBoundaryScores<Scalar> boundary_scores(const BasicTsm<Scalar>& tsm, Eigen::Index begin, Eigen::Index end,
                                            const BasicContrastiveKernel<Scalar>& kernel,
                                            Padding padding = Padding::zero) {
  return boundary_scores(tsm.values, begin, end, kernel, padding);
}

/// Full-context scores keyed by global frame, shared between the recursion
/// levels of one detection run. With zero padding a cached value is used for
/// frame i inside [s, e) only when the kernel window around i fits in [s, e),
/// and padded scores are never stored. One cache belongs to one
/// (tsm, kernel, padding) triple.
template <typename Scalar>
class BasicScoreCache {
 public:
  explicit BasicScoreCache(Eigen::Index length) : values_(length), known_(static_cast<std::size_t>(length), false) {}

  Eigen::Index length() const { return values_.size(); }

  std::optional<Scalar> lookup(Eigen::Index frame) const {
    if (!known_[static_cast<std::size_t>(frame)]) return std::nullopt;
    return values_(frame);
  }

  void store(Eigen::Index frame, Scalar value) {
    values_(frame) = value;
    known_[static_cast<std::size_t>(frame)] = true;
  }

  std::size_t stored() const { return static_cast<std::size_t>(std::count(known_.begin(), known_.end(), true)); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

  template <typename Derived>
  friend BasicBoundaryScores<Scalar> scores_for_interval(BasicScoreCache& cache, const Eigen::MatrixBase<Derived>& tsm,
                                                         Eigen::Index begin, Eigen::Index end,
                                                         const BasicContrastiveKernel<Scalar>& kernel,
                                                         Padding padding) {
    detail::check_interval(begin, end, tsm.rows());
    if (cache.length() != tsm.rows()) throw DomainError("score cache length does not match TSM");
    BasicBoundaryScores<Scalar> out{begin, end, VectorX<Scalar>(end - begin)};
    for (Eigen::Index i = begin; i < end; ++i) {
      if (!detail::context_free(i, begin, end, kernel.center(), padding)) {
        out.scores(i - begin) = detail::kernel_response(tsm, begin, end, i, kernel, padding);
        continue;
      }
      if (auto hit = cache.lookup(i)) {
        ++cache.hits_;
        out.scores(i - begin) = *hit;
      } else {
        ++cache.misses_;
        const Scalar v = detail::kernel_response(tsm, begin, end, i, kernel, padding);
        cache.store(i, v);
        out.scores(i - begin) = v;
      }
    }
    return out;
  }

 private:
  VectorX<Scalar> values_;
  std::vector<bool> known_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

using ScoreCache = BasicScoreCache<double>;

template <typename Scalar>
BasicBoundaryScores<Scalar> scores_for_interval(BasicScoreCache<Scalar>& cache, const BasicTsm<Scalar>& tsm,
                                                Eigen::Index begin, Eigen::Index end,
                                                const BasicContrastiveKernel<Scalar>& kernel,
                                                Padding padding = Padding::zero) {
  return scores_for_interval(cache, tsm.values, begin, end, kernel, padding);
}

}  // namespace uboco

#endif  // UBOCO_SCORING_HPP
