#include "uboco/eval.hpp"

#include "uboco/error.hpp"

#include <cmath>
#include <cstdlib>

namespace uboco {

namespace {

// Absorbs rounding in theta * length so integer tolerances stay inclusive.
constexpr double kToleranceSlack = 1e-9;

double ratio(int num, int den) { return den > 0 ? static_cast<double>(num) / den : 0.0; }

double video_f1(const MatchCounts& c) {
  if (c.tp + c.fp + c.fn == 0) return 1.0;
  return f1_score(ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn));
}

}  // namespace

MatchCounts match_boundaries(const BoundaryList& pred, const BoundaryList& gt, int length, double theta,
                             std::vector<std::pair<int, int>>* pairs) {
  const double tolerance = theta * length + kToleranceSlack;
  std::vector<bool> used(gt.size(), false);
  MatchCounts counts;
  for (int p : pred) {
    std::size_t best = gt.size();
    int best_dist = 0;
    for (std::size_t k = 0; k < gt.size(); ++k) {
      if (used[k]) continue;
      const int dist = std::abs(p - gt[k]);
      if (dist > tolerance) continue;
      // gt is ascending, so the first minimum is the smaller index.
      if (best == gt.size() || dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best == gt.size()) continue;
    used[best] = true;
    ++counts.tp;
    if (pairs) pairs->emplace_back(p, gt[best]);
  }
  counts.fp = static_cast<int>(pred.size()) - counts.tp;
  counts.fn = static_cast<int>(gt.size()) - counts.tp;
  return counts;
}

std::array<double, 10> standard_thresholds() {
  std::array<double, 10> t{};
  for (int k = 0; k < 10; ++k) t[static_cast<std::size_t>(k)] = (k + 1) / 20.0;
  return t;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

ThresholdResult f1_at(const std::vector<BoundaryPrediction>& predictions, const AnnotationSet& annotations,
                      double theta, AnnotatorRule rule) {
  if (predictions.empty()) throw DomainError("evaluation: no predictions");
  if (!(theta > 0.0)) throw DomainError("evaluation: theta must be positive");
  MatchCounts total;
  for (const auto& pred : predictions) {
    auto it = annotations.find(pred.video_id);
    if (it == annotations.end()) throw DomainError("evaluation: no annotation for video '" + pred.video_id + "'");
    const BoundaryAnnotation& ann = it->second;
    validate_boundaries(pred.boundaries, ann.length);
    MatchCounts kept = match_boundaries(pred.boundaries, ann.annotators.front(), ann.length, theta);
    if (rule == AnnotatorRule::max) {
      double best = video_f1(kept);
      for (std::size_t a = 1; a < ann.annotators.size(); ++a) {
        const MatchCounts c = match_boundaries(pred.boundaries, ann.annotators[a], ann.length, theta);
        const double f = video_f1(c);
        if (f > best) {
          best = f;
          kept = c;
        }
      }
    }
    total.tp += kept.tp;
    total.fp += kept.fp;
    total.fn += kept.fn;
  }
  ThresholdResult r;
  r.theta = theta;
  r.precision = ratio(total.tp, total.tp + total.fp);
  r.recall = ratio(total.tp, total.tp + total.fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

EvalResult average_f1(const std::vector<BoundaryPrediction>& predictions, const AnnotationSet& annotations,
                      AnnotatorRule rule) {
  EvalResult result;
  double sum = 0.0;
  for (double theta : standard_thresholds()) {
    result.per_threshold.push_back(f1_at(predictions, annotations, theta, rule));
    sum += result.per_threshold.back().f1;
  }
  result.average_f1 = sum / static_cast<double>(result.per_threshold.size());
  return result;
}

}  // namespace uboco
