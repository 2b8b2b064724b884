#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xorder/metrics.hpp"

namespace xorder {

/// One group's samples sorted by descending score, ties broken by ascending
/// original index, with the prefix/suffix class counts the optimizer reads.
struct RankedGroup {
  std::string group;
  std::vector<std::size_t> order;  // indices into the original sample list
  std::vector<int> labels;         // aligned with `order`
  std::vector<double> scores;      // aligned with `order`, non-increasing

  // Sized order.size() + 1. prefix_pos[i]: positives among the first i.
  // suffix_neg[i] / suffix_pos[i]: negatives / positives at positions >= i,
  // i.e. strictly after the first i entries.
  std::vector<std::int64_t> prefix_pos;
  std::vector<std::int64_t> suffix_neg;
  std::vector<std::int64_t> suffix_pos;

  // Within-group (positive, negative) pairs won strictly on score. Any
  // cross-group ordering leaves it unchanged.
  std::int64_t within_wins = 0;

  std::size_t size() const { return order.size(); }
  std::int64_t n1() const { return prefix_pos.back(); }
  std::int64_t n0() const { return suffix_neg.front(); }
};

RankedGroup rank_within_group(std::span<const ScoredSample> samples, const std::string& group);

enum class Step : std::uint8_t { TakeA = 0, TakeB = 1 };

/// A merge of two ranked groups that keeps each group's internal order.
/// Earlier steps rank higher.
struct CrossGroupOrdering {
  std::vector<Step> steps;

  std::size_t count(Step s) const;

  /// Throws Error unless the step counts match the two group sizes.
  void validate(const RankedGroup& a, const RankedGroup& b) const;

  /// Original sample indices in merged rank order.
  std::vector<std::size_t> merged(const RankedGroup& a, const RankedGroup& b) const;

  friend bool operator==(const CrossGroupOrdering&, const CrossGroupOrdering&) = default;
};

/// Merge by descending score; cross-group ties place group a first.
CrossGroupOrdering ordering_from_scores(const RankedGroup& a, const RankedGroup& b);

/// Cross-group pair counts induced by an ordering: positives of one group
/// beat the other group's negatives placed after them.
struct CrossCounts {
  std::int64_t ab = 0;
  std::int64_t ba = 0;
};

CrossCounts cross_counts(const CrossGroupOrdering& ordering, const RankedGroup& a,
                         const RankedGroup& b);

/// Metrics induced by treating merged position as rank. Within-group
/// numerators come from the groups' scores and do not depend on the ordering.
FairnessReport metrics_from_ordering(const CrossGroupOrdering& ordering, const RankedGroup& a,
                                     const RankedGroup& b);

GroupCounts group_counts(const RankedGroup& a, const RankedGroup& b);

}  // namespace xorder
