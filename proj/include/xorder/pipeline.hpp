#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xorder/dataset.hpp"
#include "xorder/optimizer.hpp"
#include "xorder/transfer.hpp"

namespace xorder {

/// Metrics of one split before and after adjustment, plus the adjusted score
/// of every row (group-a rows keep their original score).
struct SplitOutcome {
  FairnessReport before;
  FairnessReport after;
  std::vector<double> adjusted_scores;  // aligned with Dataset::rows
};

struct AdjustOutcome {
  ObjectiveConfig objective;
  CrossGroupOrdering ordering;
  FairnessReport learned;  // metrics induced by the learned ordering
  ScoreMapping mapping;
  SplitOutcome train;
  std::optional<SplitOutcome> test;
  std::vector<std::string> warnings;
};

/// Learns a cross-group ordering on `train`, rewrites its group-b scores to
/// realize it and carries the adjustment to `test` by interpolation.
AdjustOutcome run_adjust(const Dataset& train, const Dataset* test,
                         const ObjectiveConfig& objective);

/// Adjusted scores for one dataset and one learned ordering (train side) or
/// mapping (test side). Exposed for the sweep.
SplitOutcome adjust_train_split(const Dataset& train, const CrossGroupOrdering& ordering,
                                ScoreMapping* mapping_out, std::vector<std::string>* warnings);
SplitOutcome adjust_test_split(const Dataset& test, const ScoreMapping& mapping,
                               std::vector<std::string>* warnings);

struct SweepRow {
  std::string lambda;  // number, "inf" for disparity-only, "baseline" for unadjusted
  std::string split;   // "train" or "test"
  double auc = 0.0;
  std::optional<double> delta_xauc;
  std::optional<double> delta_prf;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  // Per point (baseline first, then grid, then disparity-only): adjusted
  // scores of each split, aligned with the dataset rows.
  std::vector<std::string> point_labels;
  std::vector<std::vector<double>> train_scores;
  std::vector<std::vector<double>> test_scores;
  std::vector<std::string> warnings;
};

SweepOutcome run_sweep(const Dataset& train, const Dataset* test, const std::vector<double>& grid,
                       DisparityMetric metric, unsigned threads = 0);

struct AutoGridOptions {
  double start = 0.01;
  double factor = 2.0;
  std::size_t max_steps = 40;
  double target = 1e-4;
};

/// Grid starting at 0 then `start`, multiplied by `factor`, until the
/// training disparity of the learned ordering drops below `target` or fails
/// to decrease for two consecutive steps.
std::vector<double> auto_lambda_grid(const RankedGroup& a, const RankedGroup& b,
                                     DisparityMetric metric, const AutoGridOptions& options);

std::string lambda_label(double lambda);

}  // namespace xorder
