#pragma once

#include <span>
#include <string>
#include <vector>

#include "xorder/ordering.hpp"

namespace xorder {

/// Piecewise-linear map from original group-b training scores to their
/// adjusted values. Both sequences are non-increasing and aligned.
struct ScoreMapping {
  std::string anchor_group;      // group a, whose scores never change
  std::vector<double> train_orig_b;
  std::vector<double> train_adj_b;
  std::string scheme = "proportional";
};

struct RearrangedScores {
  std::vector<double> adjusted_b;  // aligned with the group-b RankedGroup order
  ScoreMapping mapping;
  std::vector<std::string> warnings;
};

/// Gives every run of consecutive group-b entries in `ordering` equally spaced
/// scores strictly between the group-a scores around it:
///   s_hi - t (s_hi - s_lo) / (m + 1),  t = 1..m.
/// Runs above the first or below the last group-a entry use a synthetic
/// anchor one median group-a gap (0.1 if there is none) beyond it. Runs
/// between tied group-a scores step down from the shared score (or the
/// previous group-b score, if lower) by
/// 2^-32 of the group-a score range and raise a warning.
RearrangedScores rearrange_training_scores(const CrossGroupOrdering& ordering,
                                           const RankedGroup& a, const RankedGroup& b);

struct TransferredScores {
  std::vector<double> adjusted;  // aligned with the input scores
  std::vector<std::string> warnings;
};

/// Maps each test score through the training mapping by proportional
/// interpolation inside its bracketing knot segment. Scores outside the
/// training range extrapolate with the nearest segment's slope. Repeated
/// original knots collapse to the midpoint of their adjusted values.
/// Throws EmptyMapping for an empty mapping.
TransferredScores transfer_test_scores(const ScoreMapping& mapping,
                                       std::span<const double> test_scores_b);

}  // namespace xorder
