#include "xorder/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

constexpr double kFallbackMargin = 0.1;

double median_positive_gap(const std::vector<double>& descending) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < descending.size(); ++i) {
    const double g = descending[i - 1] - descending[i];
    if (g > 0.0) gaps.push_back(g);
  }
  if (gaps.empty()) return kFallbackMargin;
  const std::size_t mid = gaps.size() / 2;
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(mid), gaps.end());
  if (gaps.size() % 2 == 1) return gaps[mid];
  const double upper = gaps[mid];
  const double lower = *std::max_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

RearrangedScores rearrange_training_scores(const CrossGroupOrdering& ordering,
                                           const RankedGroup& a, const RankedGroup& b) {
  ordering.validate(a, b);
  if (a.size() == 0) throw EmptyGroup("anchor group has no samples");

  RearrangedScores out;
  out.adjusted_b.resize(b.size());
  const double margin = median_positive_gap(a.scores);
  const double range = a.scores.front() - a.scores.back();
  const double epsilon = std::ldexp(range > 0.0 ? range : 1.0, -32);

  // Walk the ordering, collecting each maximal run of b entries together
  // with the index of the a entry before it (npos if none).
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  while (k < ordering.steps.size()) {
    if (ordering.steps[k] == Step::TakeA) {
      ++i;
      ++k;
      continue;
    }
    const std::size_t run_begin = j;
    while (k < ordering.steps.size() && ordering.steps[k] == Step::TakeB) {
      ++j;
      ++k;
    }
    const std::size_t m = j - run_begin;
    const std::size_t above = i == 0 ? npos : i - 1;
    const std::size_t below = i < a.size() ? i : npos;

    double hi = 0.0;
    double lo = 0.0;
    if (above == npos) {
      lo = a.scores[below];
      hi = lo + margin;
    } else if (below == npos) {
      hi = a.scores[above];
      lo = hi - margin;
    } else {
      hi = a.scores[above];
      lo = a.scores[below];
    }

    if (hi == lo) {
      out.warnings.push_back(fmt::format(
          "{} group-b samples sit between tied group-a scores {}; spaced by {:.3g}", m, hi,
          epsilon));
      // Continue below an earlier run inside the same tied block.
      const double start =
          run_begin > 0 ? std::min(hi, out.adjusted_b[run_begin - 1]) : hi;
      for (std::size_t t = 1; t <= m; ++t) {
        out.adjusted_b[run_begin + t - 1] = start - epsilon * static_cast<double>(t);
      }
    } else {
      // Same value as s_hi - t (s_hi - s_lo) / (m + 1), as a convex combination.
      const double parts = static_cast<double>(m + 1);
      for (std::size_t t = 1; t <= m; ++t) {
        const double w = static_cast<double>(t) / parts;
        const double w_hi = static_cast<double>(m + 1 - t) / parts;
        out.adjusted_b[run_begin + t - 1] = hi * w_hi + lo * w;
      }
    }
  }

  out.mapping.anchor_group = a.group;
  out.mapping.train_orig_b = b.scores;
  out.mapping.train_adj_b = out.adjusted_b;
  return out;
}

TransferredScores transfer_test_scores(const ScoreMapping& mapping,
                                       std::span<const double> test_scores_b) {
  if (mapping.train_orig_b.empty() || mapping.train_orig_b.size() != mapping.train_adj_b.size()) {
    throw EmptyMapping("score mapping has no knots");
  }
  TransferredScores out;

  // Collapse repeated original scores to one knot at the midpoint of their
  // adjusted values; knots end up strictly decreasing in x.
  std::vector<double> xs;
  std::vector<double> ys;
  const auto& orig = mapping.train_orig_b;
  const auto& adj = mapping.train_adj_b;
  for (std::size_t lo = 0; lo < orig.size();) {
    std::size_t hi = lo;
    while (hi < orig.size() && orig[hi] == orig[lo]) ++hi;
    xs.push_back(orig[lo]);
    ys.push_back(hi - lo == 1 ? adj[lo] : 0.5 * (adj[lo] + adj[hi - 1]));
    if (hi - lo > 1) {
      out.warnings.push_back(fmt::format(
          "{} training scores tie at {}; their segment maps to its adjusted midpoint", hi - lo,
          orig[lo]));
    }
    lo = hi;
  }

  const std::size_t n = xs.size();
  auto slope = [&](std::size_t t) { return (ys[t] - ys[t + 1]) / (xs[t] - xs[t + 1]); };
  // A single knot carries no slope; shift scores rigidly.
  const double top_slope = n > 1 ? slope(0) : 1.0;
  const double bottom_slope = n > 1 ? slope(n - 2) : 1.0;

  out.adjusted.reserve(test_scores_b.size());
  for (double s : test_scores_b) {
    double v = 0.0;
    if (s >= xs.front()) {
      v = std::max(ys.front(), ys.front() + (s - xs.front()) * top_slope);
    } else if (s <= xs.back()) {
      v = std::min(ys.back(), ys.back() + (s - xs.back()) * bottom_slope);
    } else {
      // First knot with x <= s; xs is strictly decreasing.
      const auto it = std::lower_bound(xs.begin(), xs.end(), s, std::greater<>());
      const std::size_t t = static_cast<std::size_t>(it - xs.begin());
      if (xs[t] == s) {
        v = ys[t];
      } else {
        // xs[t-1] > s > xs[t]
        const double x_hi = xs[t - 1];
        const double x_lo = xs[t];
        v = ys[t - 1] - (x_hi - s) / (x_hi - x_lo) * (ys[t - 1] - ys[t]);
      }
    }
    out.adjusted.push_back(v);
  }
  return out;
}

}  // namespace xorder
