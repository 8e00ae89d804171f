#ifndef UBOCO_EVAL_HPP
#define UBOCO_EVAL_HPP

#include "uboco/features.hpp"
#include "uboco/rtp.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace uboco {

struct MatchCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;

  bool operator==(const MatchCounts&) const = default;
};

/// Greedy one-to-one matching: predictions in ascending order each take the
/// nearest unmatched ground-truth index within theta * length (inclusive,
/// ties to the smaller index). `pairs`, when given, receives (pred, gt).
MatchCounts match_boundaries(const BoundaryList& pred, const BoundaryList& gt, int length, double theta,
                             std::vector<std::pair<int, int>>* pairs = nullptr);

struct ThresholdResult {
  double theta = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalResult {
  std::vector<ThresholdResult> per_threshold;
  double average_f1 = 0;
};

/// How a video with several annotators is scored: `max` keeps the annotator
/// with the best per-video F1 (ties to the lowest index), `first` uses annotator 0.
enum class AnnotatorRule { max, first };

/// theta = 0.05, 0.10, ..., 0.50.
std::array<double, 10> standard_thresholds();

/// f1 = 2PR / (P + R), 0 when P + R = 0.
double f1_score(double precision, double recall);

/// Corpus-level precision/recall/F1 from per-video counts accumulated in
/// prediction order. Every prediction needs an annotation of the same video.
ThresholdResult f1_at(const std::vector<BoundaryPrediction>& predictions, const AnnotationSet& annotations,
                      double theta, AnnotatorRule rule = AnnotatorRule::max);

EvalResult average_f1(const std::vector<BoundaryPrediction>& predictions, const AnnotationSet& annotations,
                      AnnotatorRule rule = AnnotatorRule::max);

}  // namespace uboco

#endif  // UBOCO_EVAL_HPP
