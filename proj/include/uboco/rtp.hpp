#ifndef UBOCO_RTP_HPP
#define UBOCO_RTP_HPP

#include "uboco/features.hpp"
#include "uboco/scoring.hpp"
#include "uboco/tsm.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace uboco {

enum class SelectionMode { argmax, sample };

/// Recursive TSM parsing knobs. Defaults are calibrated on the synthetic corpora.
struct RtpConfig {
  int kernel_size = 11;
  int min_parse_len = 6;      // intervals shorter than this are not split
  double score_gap = 0.2;     // stop when max - mean of candidate scores is below this
  double top_fraction = 0.25; // share of candidates kept for selection (at least one)
  double temperature = 0.1;   // softmax temperature in sample mode
  int min_segment = 3;        // candidates keep this many frames on each side
  SelectionMode mode = SelectionMode::argmax;
  std::uint64_t seed = 0;
  Padding padding = Padding::zero;
};

void validate(const RtpConfig& cfg);

struct BoundaryPrediction {
  std::string video_id;
  BoundaryList boundaries;  // strictly increasing, in [1, L-1]
  std::vector<int> depths;  // recursion level of each boundary, root = 1
};

/// Every interval the recursion visited, in visit order.
struct RtpTrace {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> intervals;
};

/// Divide and conquer: score [s, e), pick one split among the top candidates,
/// recurse on [s, b) then [b, e). Argmax ties resolve to the later frame, so a
/// clean step between frames b-1 and b (whose response plateaus on both) maps to b.
BoundaryPrediction rtp_detect(const Tsm& tsm, const RtpConfig& cfg, RtpTrace* trace = nullptr);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Baseline: every position in [m, M-m] whose sigmoid score exceeds theta.
BoundaryList detect_threshold(const BoundaryScores& scores, double theta, int min_segment);

/// Baseline: positions in [m, M-m] with s[i] > s[i-1], s[i] >= s[i+1] and sigmoid(s[i]) > theta.
BoundaryList detect_local_maxima(const BoundaryScores& scores, double theta, int min_segment);

}  // namespace uboco

#endif  // UBOCO_RTP_HPP
