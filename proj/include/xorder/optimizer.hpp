#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xorder/metrics.hpp"
#include "xorder/ordering.hpp"

namespace xorder {

enum class DisparityMetric { XAUC, PRF };

const char* to_string(DisparityMetric metric);

/// Trade-off between utility and disparity. With `disparity_only` the
/// optimizer minimizes the disparity alone and `lambda` is ignored.
struct ObjectiveConfig {
  double lambda = 0.0;
  DisparityMetric metric = DisparityMetric::XAUC;
  bool disparity_only = false;
  std::uint64_t cell_budget = 1'000'000'000;  // max n_a * n_b for xorder_dp
};

/// Evaluates the partial objective of a (possibly partial) cross-group path
/// from its two cross-group win counts. A prefix path is scored as if the
/// remaining suffixes of both groups were appended after it.
class Objective {
 public:
  /// Throws EmptyClass when a denominator the configuration needs is zero and
  /// SpecError for a negative or non-finite lambda.
  Objective(const RankedGroup& a, const RankedGroup& b, const ObjectiveConfig& config);

  /// Partial objective value. For XAUC:
  ///   c_ab + c_ba - lambda * k * |c_ab / k_ab - c_ba / k_ba|,
  /// for PRF the penalty uses (c_ab + wins_a) / (n1_a n0) and
  /// (c_ba + wins_b) / (n1_b n0). Disparity-only mode returns -disparity.
  double value(const CrossCounts& c) const;

  /// True when `lhs` scores strictly higher than `rhs`. Exact (integer) in
  /// disparity-only mode and for lambda == 0.
  bool better(const CrossCounts& lhs, const CrossCounts& rhs) const;

  /// The configured disparity of a complete path, as an exact fraction.
  Rate disparity(const CrossCounts& c) const;

  const ObjectiveConfig& config() const { return config_; }
  const GroupCounts& counts() const { return counts_; }

 private:
  __int128 disparity_numerator(const CrossCounts& c) const;
  std::int64_t disparity_denominator() const;

  ObjectiveConfig config_;
  GroupCounts counts_;
  std::int64_t wins_a_ = 0;
  std::int64_t wins_b_ = 0;
};

enum class Back : std::uint8_t { Start, FromA, FromB };

/// State of the best path reaching one lattice point.
struct DpCell {
  std::size_t i = 0;  // group-a elements consumed
  std::size_t j = 0;  // group-b elements consumed
  std::int64_t c_ab = 0;
  std::int64_t c_ba = 0;
  double ghat = 0.0;
  Back back = Back::Start;
};

/// Lattice dynamic program over (n_a + 1) x (n_b + 1) points. At an interior
/// point the path through (i-1, j) extended by a(i) wins only if its
/// objective is strictly larger than the path through (i, j-1) extended by
/// b(j). O(n_a n_b) time, one bit of backpointer per point.
CrossGroupOrdering xorder_dp(const RankedGroup& a, const RankedGroup& b,
                             const ObjectiveConfig& config);

/// Walks `ordering` from (0,0) and returns the cell state after each step
/// (n_a + n_b + 1 cells, the first being the start).
std::vector<DpCell> replay_path(const CrossGroupOrdering& ordering, const RankedGroup& a,
                                const RankedGroup& b, const ObjectiveConfig& config);

/// Single forward pass in disparity-only mode: append whichever next element
/// gives the larger objective, group a on ties. O(n_a + n_b).
CrossGroupOrdering greedy_forward(const RankedGroup& a, const RankedGroup& b,
                                  DisparityMetric metric);

/// Inserts one whole group as a block into the other at the position that
/// minimizes the disparity, trying both directions and keeping the better
/// (block b inside a on ties).
CrossGroupOrdering insertion_baseline(const RankedGroup& a, const RankedGroup& b,
                                      DisparityMetric metric);

/// Exhaustive search over every interleaving for the maximizer of
/// AUC - lambda * disparity (or minimal disparity in disparity-only mode).
/// Earliest step sequence (TakeA < TakeB) wins ties. Throws CapacityExceeded
/// when the number of interleavings is above `path_budget`.
CrossGroupOrdering brute_force_optimal(const RankedGroup& a, const RankedGroup& b,
                                       const ObjectiveConfig& config,
                                       std::uint64_t path_budget = 1'000'000);

struct CurvePoint {
  double lambda = 0.0;
  bool disparity_only = false;
  bool baseline = false;
  double auc = 0.0;
  std::optional<double> delta_xauc;
  std::optional<double> delta_prf;
  CrossGroupOrdering ordering;
};

struct TradeoffCurve {
  CurvePoint baseline;              // unadjusted, score-induced ordering
  std::vector<CurvePoint> points;   // grid order, then the disparity-only endpoint
};

/// Runs xorder_dp for every lambda in a strictly increasing, nonnegative grid
/// plus the disparity-only endpoint. Runs are independent and execute on up
/// to `threads` threads (0 = hardware concurrency); results keep grid order.
TradeoffCurve sweep_lambda(const RankedGroup& a, const RankedGroup& b,
                           std::span<const double> lambda_grid, DisparityMetric metric,
                           unsigned threads = 0);

}  // namespace xorder
