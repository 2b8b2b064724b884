#pragma once

#include <iosfwd>
#include <string>

#include "xorder/metrics.hpp"
#include "xorder/pipeline.hpp"

namespace xorder {

/// Single-line JSON object with every report field, the raw integer pair
/// counts and the group counts. Doubles use 17 significant digits, absent
/// rates are null. The same bytes are embedded in run summaries.
std::string report_json(const FairnessReport& report);

/// metric,value lines for every rate and pair count.
std::string report_csv(const FairnessReport& report);

struct RunDescription {
  std::string command;  // "adjust"
  std::string train_source;
  std::string test_source;  // empty when there is no test split
};

/// Pretty-printed summary of an adjust run; each report is embedded as the
/// exact output of report_json.
std::string adjust_summary_json(const AdjustOutcome& outcome, const Dataset& train,
                                const RunDescription& run);

/// Header lambda,split,auc,delta_xauc,delta_prf. Absent rates are empty.
void write_curve_csv(std::ostream& out, const SweepOutcome& sweep);

}  // namespace xorder
