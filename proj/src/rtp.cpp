#include "uboco/rtp.hpp"

#include "uboco/error.hpp"
#include "uboco/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uboco {

void validate(const RtpConfig& cfg) {
  if (cfg.kernel_size < 3 || cfg.kernel_size % 2 == 0) throw DomainError("rtp: kernel size must be odd and >= 3");
  if (cfg.min_parse_len < 2) throw DomainError("rtp: min_parse_len must be >= 2");
  if (cfg.min_segment < 1) throw DomainError("rtp: min_segment must be >= 1");
  if (cfg.min_segment > cfg.min_parse_len) throw DomainError("rtp: min_segment must not exceed min_parse_len");
  if (!(cfg.top_fraction > 0.0 && cfg.top_fraction <= 1.0)) throw DomainError("rtp: top_fraction must be in (0, 1]");
  if (!(cfg.temperature > 0.0)) throw DomainError("rtp: temperature must be > 0");
  if (!std::isfinite(cfg.score_gap)) throw DomainError("rtp: score_gap must be finite");
}

namespace {

struct Parser {
  const Tsm& tsm;
  const RtpConfig& cfg;
  ContrastiveKernel kernel;
  ScoreCache cache;
  Rng rng;
  RtpTrace* trace;
  std::vector<std::pair<int, int>> found;  // (boundary, depth)

  double uniform() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  void parse(Eigen::Index begin, Eigen::Index end, int depth) {
    if (trace) trace->intervals.emplace_back(begin, end);
    const Eigen::Index len = end - begin;
    if (len < cfg.min_parse_len) return;

    const BoundaryScores scores = scores_for_interval(cache, tsm, begin, end, kernel, cfg.padding);
    std::vector<Eigen::Index> candidates;
    for (Eigen::Index i = cfg.min_segment; len - i >= cfg.min_segment; ++i) candidates.push_back(i);
    if (candidates.empty()) return;

    double mean = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (auto i : candidates) {
      mean += scores.scores(i);
      best = std::max(best, scores.scores(i));
    }
    mean /= static_cast<double>(candidates.size());
    if (best - mean < cfg.score_gap) return;

    // Highest score first; among equal scores the later frame first.
    std::stable_sort(candidates.begin(), candidates.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double sa = scores.scores(a), sb = scores.scores(b);
      return sa != sb ? sa > sb : a > b;
    });
    const auto keep = static_cast<std::size_t>(
        std::max(1.0, std::ceil(cfg.top_fraction * static_cast<double>(candidates.size()))));
    candidates.resize(std::min(keep, candidates.size()));

    Eigen::Index pick = candidates.front();
    if (cfg.mode == SelectionMode::sample && candidates.size() > 1) {
      const double top = scores.scores(candidates.front());
      std::vector<double> weights;
      weights.reserve(candidates.size());
      for (auto i : candidates) weights.push_back(std::exp((scores.scores(i) - top) / cfg.temperature));
      const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
      double u = uniform() * total;
      pick = candidates.back();
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (u < weights[k]) {
          pick = candidates[k];
          break;
        }
        u -= weights[k];
      }
    }

    const Eigen::Index boundary = begin + pick;
    found.emplace_back(static_cast<int>(boundary), depth);
    parse(begin, boundary, depth + 1);
    parse(boundary, end, depth + 1);
  }
};

BoundaryList positions_in_margin(const BoundaryScores& scores, int min_segment, auto&& accept) {
  BoundaryList out;
  const Eigen::Index len = scores.size();
  for (Eigen::Index i = std::max<Eigen::Index>(min_segment, 0); len - i >= min_segment; ++i)
    if (accept(i)) out.push_back(static_cast<int>(scores.begin + i));
  return out;
}

}  // namespace

BoundaryPrediction rtp_detect(const Tsm& tsm, const RtpConfig& cfg, RtpTrace* trace) {
  validate(cfg);
  if (tsm.size() < 1) throw DomainError("rtp: empty TSM");
  Parser parser{tsm, cfg, make_kernel(cfg.kernel_size), ScoreCache(tsm.size()), Rng(cfg.seed), trace, {}};
  parser.parse(0, tsm.size(), 1);
  std::sort(parser.found.begin(), parser.found.end());
  BoundaryPrediction pred;
  for (auto [b, d] : parser.found) {
    pred.boundaries.push_back(b);
    pred.depths.push_back(d);
  }
  return pred;
}

BoundaryList detect_threshold(const BoundaryScores& scores, double theta, int min_segment) {
  return positions_in_margin(scores, min_segment, [&](Eigen::Index i) { return sigmoid(scores.scores(i)) > theta; });
}

BoundaryList detect_local_maxima(const BoundaryScores& scores, double theta, int min_segment) {
  const auto& s = scores.scores;
  const Eigen::Index len = scores.size();
  return positions_in_margin(scores, min_segment, [&](Eigen::Index i) {
    const bool left = i == 0 || s(i) > s(i - 1);
    const bool right = i + 1 >= len || s(i) >= s(i + 1);
    return left && right && sigmoid(s(i)) > theta;
  });
}

}  // namespace uboco
