#include "xorder/pipeline.hpp"

#include <algorithm>

#include "xorder/errors.hpp"

namespace xorder {
namespace {

std::vector<double> group_b_scores(const Dataset& data) {
  std::vector<double> out;
  for (const auto& s : data.samples) {
    if (s.group == data.group_b) out.push_back(s.score);
  }
  return out;
}

FairnessReport report_with_scores(const Dataset& data, const std::vector<double>& scores) {
  std::vector<ScoredSample> adjusted = data.samples;
  for (std::size_t i = 0; i < adjusted.size(); ++i) adjusted[i].score = scores[i];
  return fairness_report(adjusted, data.group_a, data.group_b);
}

void append(std::vector<std::string>* sink, const std::vector<std::string>& items,
            const std::string& prefix) {
  if (sink == nullptr) return;
  for (const auto& w : items) sink->push_back(prefix + w);
}

}  // namespace

std::string lambda_label(double lambda) { return format_double(lambda); }

SplitOutcome adjust_train_split(const Dataset& train, const CrossGroupOrdering& ordering,
                                ScoreMapping* mapping_out, std::vector<std::string>* warnings) {
  const RankedGroup a = rank_within_group(train.samples, train.group_a);
  const RankedGroup b = rank_within_group(train.samples, train.group_b);
  RearrangedScores rearranged = rearrange_training_scores(ordering, a, b);
  append(warnings, rearranged.warnings, "train: ");

  SplitOutcome out;
  out.adjusted_scores.resize(train.samples.size());
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    out.adjusted_scores[i] = train.samples[i].score;
  }
  for (std::size_t t = 0; t < b.size(); ++t) {
    out.adjusted_scores[b.order[t]] = rearranged.adjusted_b[t];
  }
  out.before = fairness_report(train.samples, train.group_a, train.group_b);
  out.after = report_with_scores(train, out.adjusted_scores);
  if (mapping_out != nullptr) *mapping_out = std::move(rearranged.mapping);
  return out;
}

SplitOutcome adjust_test_split(const Dataset& test, const ScoreMapping& mapping,
                               std::vector<std::string>* warnings) {
  const std::vector<double> b_scores = group_b_scores(test);
  TransferredScores transferred = transfer_test_scores(mapping, b_scores);
  append(warnings, transferred.warnings, "test: ");

  SplitOutcome out;
  out.adjusted_scores.reserve(test.samples.size());
  std::size_t t = 0;
  for (const auto& s : test.samples) {
    out.adjusted_scores.push_back(s.group == test.group_b ? transferred.adjusted[t++] : s.score);
  }
  out.before = fairness_report(test.samples, test.group_a, test.group_b);
  out.after = report_with_scores(test, out.adjusted_scores);
  return out;
}

AdjustOutcome run_adjust(const Dataset& train, const Dataset* test,
                         const ObjectiveConfig& objective) {
  if (test != nullptr && (test->group_a != train.group_a || test->group_b != train.group_b)) {
    throw GroupCountError("train and test group roles differ");
  }
  const RankedGroup a = rank_within_group(train.samples, train.group_a);
  const RankedGroup b = rank_within_group(train.samples, train.group_b);

  AdjustOutcome out;
  out.objective = objective;
  out.ordering = xorder_dp(a, b, objective);
  out.learned = metrics_from_ordering(out.ordering, a, b);
  out.train = adjust_train_split(train, out.ordering, &out.mapping, &out.warnings);
  if (test != nullptr) out.test = adjust_test_split(*test, out.mapping, &out.warnings);
  return out;
}

SweepOutcome run_sweep(const Dataset& train, const Dataset* test, const std::vector<double>& grid,
                       DisparityMetric metric, unsigned threads) {
  if (test != nullptr && (test->group_a != train.group_a || test->group_b != train.group_b)) {
    throw GroupCountError("train and test group roles differ");
  }
  const RankedGroup a = rank_within_group(train.samples, train.group_a);
  const RankedGroup b = rank_within_group(train.samples, train.group_b);
  const TradeoffCurve curve = sweep_lambda(a, b, grid, metric, threads);

  SweepOutcome out;
  auto add_rows = [&](const std::string& label, const FairnessReport& tr,
                      const FairnessReport* te) {
    out.rows.push_back({label, "train", tr.auc.value_or(0.0), tr.delta_xauc, tr.delta_prf});
    if (te != nullptr) {
      out.rows.push_back({label, "test", te->auc.value_or(0.0), te->delta_xauc, te->delta_prf});
    }
  };

  // Unadjusted scores.
  {
    const FairnessReport tr = fairness_report(train.samples, train.group_a, train.group_b);
    std::optional<FairnessReport> te;
    if (test != nullptr) te = fairness_report(test->samples, test->group_a, test->group_b);
    add_rows("baseline", tr, te ? &*te : nullptr);
    out.point_labels.emplace_back("baseline");
    std::vector<double> tr_scores, te_scores;
    for (const auto& s : train.samples) tr_scores.push_back(s.score);
    if (test != nullptr) {
      for (const auto& s : test->samples) te_scores.push_back(s.score);
    }
    out.train_scores.push_back(std::move(tr_scores));
    out.test_scores.push_back(std::move(te_scores));
  }

  for (const CurvePoint& p : curve.points) {
    const std::string label = p.disparity_only ? "inf" : lambda_label(p.lambda);
    ScoreMapping mapping;
    SplitOutcome tr = adjust_train_split(train, p.ordering, &mapping, &out.warnings);
    std::optional<SplitOutcome> te;
    if (test != nullptr) te = adjust_test_split(*test, mapping, &out.warnings);
    add_rows(label, tr.after, te ? &te->after : nullptr);
    out.point_labels.push_back(label);
    out.train_scores.push_back(std::move(tr.adjusted_scores));
    out.test_scores.push_back(te ? std::move(te->adjusted_scores) : std::vector<double>{});
  }
  return out;
}

std::vector<double> auto_lambda_grid(const RankedGroup& a, const RankedGroup& b,
                                     DisparityMetric metric, const AutoGridOptions& options) {
  if (!(options.start > 0.0) || !(options.factor > 1.0) || options.max_steps == 0) {
    throw SpecError("auto grid needs start > 0, factor > 1 and at least one step");
  }
  auto disparity_at = [&](double lambda) {
    const ObjectiveConfig config{lambda, metric, false};
    const FairnessReport r = metrics_from_ordering(xorder_dp(a, b, config), a, b);
    const auto d = metric == DisparityMetric::XAUC ? r.delta_xauc : r.delta_prf;
    if (!d) throw EmptyClass("disparity undefined for this data");
    return *d;
  };

  std::vector<double> grid{0.0};
  double best = disparity_at(0.0);
  std::size_t stalled = 0;
  double lambda = options.start;
  for (std::size_t step = 0; step < options.max_steps && best >= options.target; ++step) {
    grid.push_back(lambda);
    const double d = disparity_at(lambda);
    if (d < best) {
      best = d;
      stalled = 0;
    } else if (++stalled == 2) {
      break;
    }
    lambda *= options.factor;
  }
  return grid;
}

}  // namespace xorder
